import pandas as pd
import streamlit as st

from model import maximal_cliques
from services.pipeline import compute_kernel


def render_model(model_text, spec):
    st.header("🧮 Model & Design Matrix")
    st.caption("State space, generators and the sufficient-statistics matrix A.")

    with st.expander("Methodology: Log-linear and Graphical Models"):
        st.markdown("""
        **Model matrix A:**
        - One **column** per joint state, ordered with the last variable changing fastest.
        - One **row** per (generator, local state) pair; entry 1 when the joint state restricts to it.
        - **Graphical models** use the maximal cliques of the graph as generators.
        - A distribution factors when it is (a normalization of) a monomial map of A.
        """)

    space = spec.space
    col1, col2, col3 = st.columns(3)
    col1.metric("Variables", len(space.variables))
    col2.metric("Joint States (m)", space.m)

    A = spec.matrix()
    col3.metric("Parameters (d)", A.d)

    st.subheader("State Space")
    st.dataframe(pd.DataFrame(space.variables, columns=["variable", "cardinality"]), hide_index=True)

    st.subheader("Generators")
    if spec.is_graphical:
        gens = maximal_cliques(spec.graph)
        st.write(f"Maximal cliques of a graph with {len(spec.graph.edges)} edges:")
    else:
        gens = spec.generators
    st.write(", ".join("{" + ",".join(g) + "}" for g in gens))

    st.subheader("Matrix A")
    st.dataframe(A.to_frame())

    with st.spinner("Computing integer kernel..."):
        r, lattice = compute_kernel(model_text)
    k1, k2 = st.columns(2)
    k1.metric("rank(A)", r)
    k2.metric("Kernel Lattice Rank", len(lattice))
    if len(lattice):
        st.dataframe(pd.DataFrame(list(lattice.basis), columns=list(A.column_labels)), hide_index=True)
    else:
        st.info("The kernel is trivial: every distribution with nice support factors.")
