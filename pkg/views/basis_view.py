import pandas as pd
import streamlit as st

from ideal import degree_histogram, format_histogram, ideal_contains, parse_binomial, render_binomial
from services.errors import DomainError
from services.pipeline import compute_global_statements, compute_groebner, compute_markov_basis, compute_pairwise


def render_markov_basis(model_text, spec, budget):
    st.header("🔗 Markov Basis")
    st.caption("Minimal generating set of the toric ideal I_A.")

    with st.expander("Methodology: Toric Ideal Pipeline"):
        st.markdown("""
        1. **Kernel**: integer basis of ker(A), one binomial per vector.
        2. **Gröbner basis**: Buchberger's algorithm on binomials (graded reverse lex).
        3. **Saturation**: divide out every variable to reach the full toric ideal.
        4. **Minimalize**: keep an element only if lower-degree elements do not generate it.

        Graph models start from the pairwise Markov ideal instead of the kernel;
        saturation recovers the same toric ideal either way.
        """)

    from_kernel = st.checkbox("Start from kernel binomials", value=False, disabled=not spec.is_graphical)

    if st.button("Compute Markov Basis", key="run_markov_basis"):
        st.session_state.basis_requested = True

    if not st.session_state.get("basis_requested"):
        return

    with st.spinner("Running Gröbner pipeline..."):
        basis = compute_markov_basis(model_text, from_kernel, budget["seconds"], budget["max_degree"])

    if basis is None:
        st.warning("⚠️ Budget exhausted before the basis was complete (TRUNCATED).")
        return

    histogram = degree_histogram(basis)
    col1, col2 = st.columns(2)
    col1.metric("Generators", len(basis))
    col2.metric("Degree Histogram", format_histogram(histogram) or "empty")
    st.dataframe(basis.to_frame(spec.space), hide_index=True, use_container_width=True)

    st.subheader("Ideal Membership")
    candidate = st.text_input("Binomial", placeholder="p0000 p0101 - p0001 p0100")
    if candidate:
        try:
            b = parse_binomial(candidate, spec.space)
            gb = compute_groebner(model_text, from_kernel, budget["seconds"], budget["max_degree"])
            if ideal_contains(gb, b):
                st.success(f"{render_binomial(b, spec.space)} lies in I_A")
            else:
                st.error(f"{render_binomial(b, spec.space)} is not in I_A")
        except DomainError as e:
            st.error(f"⚠️ {e}")

    if not spec.is_graphical:
        return

    st.divider()
    st.subheader("Pairwise Markov Ideal")
    pairwise = compute_pairwise(model_text)
    st.write(f"{len(pairwise)} quadrics from {len(spec.graph.non_edges())} non-edges.")
    st.dataframe(pairwise.to_frame(spec.space), hide_index=True, use_container_width=True)

    statements = compute_global_statements(model_text)
    if statements is None:
        st.info("Too many vertices to enumerate global Markov statements.")
        return
    st.subheader("Global Markov Statements")
    st.dataframe(
        pd.DataFrame({
            "statement": [str(s) for s in statements],
            "saturated": [s.is_saturated(spec.space) for s in statements],
        }),
        hide_index=True,
    )
