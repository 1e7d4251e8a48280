import streamlit as st

from ideal import render_binomial
from services.errors import ResourceError
from services.loaders import dump_model
from services.pipeline import compute_pairs_model, compute_printed_lines_report


def render_constructions():
    st.header("🧬 Pairs Model & Parity Binomial")
    st.caption("Graphs whose toric ideal needs generators of degree 2^n.")

    with st.expander("Methodology: Non-interacting Pairs"):
        st.markdown("""
        The graph on 2n binary variables is complete except for the n edges
        {Xi, X(i+n)}. The **parity binomial** pairs the states whose odd
        coordinates agree and whose even-coordinate parity matches the odd
        value against those with the opposite parity. It has degree 2^n,
        lies in the toric ideal, and is needed in any Markov basis.
        """)

    n = st.slider("n (pairs)", min_value=1, max_value=6, value=2)
    try:
        model, b = compute_pairs_model(n)
    except ResourceError as e:
        st.warning(f"⚠️ {e}")
        return

    col1, col2, col3 = st.columns(3)
    col1.metric("Variables", 2 * n)
    col2.metric("Edges", len(model.graph.edges))
    col3.metric("Binomial Degree", b.degree)

    st.subheader("Model File")
    st.code(dump_model(model.spec))

    st.subheader("Parity Binomial")
    st.code(render_binomial(b, model.space))

    st.divider()
    st.subheader("Printed n = 3 Lines")
    st.caption("Kernel membership of the two printed lines under each reading.")
    st.dataframe(compute_printed_lines_report(), hide_index=True, use_container_width=True)
