import pandas as pd
import streamlit as st

from dist import Distribution, Status, classify, recover_parameters
from ideal import render_binomial
from indep import cpr
from services.errors import DomainError
from services.loaders import dump_distribution, parse_cpd_spec, parse_distribution_text
from services.pipeline import compute_markov_basis

STATUS_BADGES = {
    Status.FACTORS: "🟢 FACTORS",
    Status.LIMIT_ONLY: "🟡 LIMIT_ONLY",
    Status.OUTSIDE: "🔴 OUTSIDE",
}


def _default_distribution(space):
    return dump_distribution(Distribution.uniform(space))


def render_classify(model_text, spec, budget):
    st.header("⚖️ Factorization Check")
    st.caption("Does a distribution factor through the model, only in the limit, or not at all?")

    with st.expander("Methodology: Verdicts"):
        st.markdown("""
        - **OUTSIDE**: some Markov basis binomial does not vanish at P.
        - **FACTORS**: every binomial vanishes and the support is *nice*
          (the rows touching the support cover no column outside it).
        - **LIMIT_ONLY**: every binomial vanishes but the support is not nice;
          P is only a limit of factoring distributions.

        Probabilities are exact fractions. Omitted states are zero, and
        entries that do not sum to 1 are normalized.
        """)

    A = spec.matrix()
    text = st.text_area(
        "Distribution (state probability)",
        value=_default_distribution(spec.space),
        height=200,
        key=f"dist_{hash(model_text)}",
    )

    try:
        P = parse_distribution_text(text, spec.space, "<distribution>")
    except DomainError as e:
        st.error(f"⚠️ {e}")
        return

    with st.spinner("Computing Markov basis..."):
        basis = compute_markov_basis(model_text, False, budget["seconds"], budget["max_degree"])
    if basis is None:
        st.warning("⚠️ Budget exhausted before the basis was complete (TRUNCATED).")
        return

    verdict = classify(P, A, basis)
    col1, col2, col3 = st.columns(3)
    col1.metric("Verdict", STATUS_BADGES[verdict.status])
    col2.metric("Support Size", f"{len(verdict.support)}/{spec.space.m}")
    col3.metric("Nice Support", "Yes" if verdict.nice else "No")

    if verdict.failing_binomial is not None:
        b = verdict.failing_binomial
        st.error(f"Non-vanishing binomial: `{render_binomial(b, spec.space)}`")
        st.write(f"Value at P: {b.evaluate(P.probs)}")

    if verdict.status is Status.FACTORS:
        st.subheader("Recovered Parameters")
        result = recover_parameters(P, A)
        if result:
            st.dataframe(
                pd.DataFrame({"parameter": list(A.row_labels), "t": [float(t) for t in result.t]}),
                hide_index=True,
            )
        else:
            st.warning(f"Recovery failed: {result.reason}")

    st.divider()
    st.subheader("Cross-Product Ratio")
    cpd_text = st.text_input("CPD spec", placeholder="X=X3:0/1;Y=X4:0/1;Z=X1,X2:01")
    if cpd_text:
        try:
            value = cpr(P, parse_cpd_spec(cpd_text, spec.space))
            st.metric("CPR", f"{value.numerator}/{value.denominator}")
        except DomainError as e:
            st.error(f"⚠️ {e}")
