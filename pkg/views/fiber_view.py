import streamlit as st

from fiber import WalkConfig, connectivity_check, enumerate_fiber, walk_trace
from services import settings
from services.errors import DomainError, ResourceError
from services.loaders import dump_table, parse_table_text
from services.pipeline import compute_markov_basis


def render_fiber(model_text, spec, budget):
    st.header("🎲 Fiber Walk")
    st.caption("Markov basis moves on contingency tables with fixed sufficient statistics.")

    with st.expander("Methodology: Fibers and Moves"):
        st.markdown("""
        The **fiber** of a table n is every non-negative integer table with
        the same statistics A·n. A Markov basis connects every fiber: each
        step picks a basis move and a direction, and stays put when a count
        would go negative (lazy walk).
        """)

    text = st.text_area("Starting table (state count)", height=150, key=f"table_{hash(model_text)}")
    if not text.strip():
        st.info("Enter a table to start.")
        return

    try:
        table = parse_table_text(text, spec.space, "<table>")
    except DomainError as e:
        st.error(f"⚠️ {e}")
        return

    col1, col2 = st.columns(2)
    steps = col1.number_input("Steps", min_value=1, value=settings.DEFAULT_WALK_STEPS)
    seed = col2.number_input("Seed", min_value=0, value=settings.DEFAULT_WALK_SEED)

    basis = compute_markov_basis(model_text, False, budget["seconds"], budget["max_degree"])
    if basis is None:
        st.warning("⚠️ Budget exhausted before the basis was complete (TRUNCATED).")
        return
    if len(basis) == 0:
        st.info("The Markov basis is empty: every fiber is a single table.")
        return

    if st.button("Run Walk", key="run_walk"):
        with st.spinner("Walking..."):
            trace = list(walk_trace(table, basis, WalkConfig(int(steps), int(seed))))
        moved = sum(1 for a, b in zip([table] + trace, trace) if a.counts != b.counts)
        m1, m2 = st.columns(2)
        m1.metric("Steps Taken", len(trace))
        m2.metric("Accepted Moves", moved)
        st.code(dump_table(trace[-1]) if trace else dump_table(table))

    if st.button("Check Fiber Connectivity", key="run_connectivity"):
        try:
            with st.spinner("Enumerating fiber..."):
                size = len(enumerate_fiber(table, spec.matrix()))
                connected = connectivity_check(table, basis, spec.matrix())
            st.metric("Fiber Size", size)
            if connected:
                st.success("✅ Basis moves connect the fiber")
            else:
                st.error("❌ Fiber is disconnected under these moves")
        except ResourceError as e:
            st.warning(f"⚠️ {e}")
