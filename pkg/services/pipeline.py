"""
Cached pipeline runs for the explorer.

Inputs are plain text and numbers so st.cache_data can hash them. A budget
overrun is logged and returned as None; every other ToricError reaches the
view, which shows it.
"""

import streamlit as st

from constructions import pairs_model, parity_binomial, printed_lines_report
from ideal import Budget, buchberger
from indep import global_statements, model_markov_basis, pairwise_ideal
from lattice import integer_kernel, rank
from services import settings
from services.errors import BudgetExceeded
from services.loaders import parse_model_text
from services.logger import setup_logger
logger = setup_logger(__name__)


@st.cache_data(ttl=3600)
def load_model_text(text):
    return parse_model_text(text, "<explorer>")


@st.cache_data(ttl=3600)
def compute_kernel(text):
    A = load_model_text(text).matrix()
    return rank(A), integer_kernel(A)


@st.cache_data(ttl=3600, show_spinner=False)
def compute_markov_basis(text, from_kernel=False, seconds=None, max_degree=None):
    spec = load_model_text(text)
    try:
        return model_markov_basis(spec, from_kernel, Budget(seconds=seconds, max_degree=max_degree))
    except BudgetExceeded as e:
        logger.warning(f"Markov basis truncated: {e}")
        return None


@st.cache_data(ttl=3600)
def compute_pairwise(text):
    spec = load_model_text(text)
    return pairwise_ideal(spec.graph, spec.space)


@st.cache_data(ttl=3600)
def compute_global_statements(text):
    spec = load_model_text(text)
    if len(spec.graph.vertices) > settings.GLOBAL_MAX_VERTICES:
        logger.info(f"Skipping global statements for {len(spec.graph.vertices)} vertices")
        return None
    return global_statements(spec.graph)


@st.cache_data(ttl=3600)
def compute_groebner(text, from_kernel=False, seconds=None, max_degree=None):
    basis = compute_markov_basis(text, from_kernel, seconds, max_degree)
    return None if basis is None else buchberger(basis)


@st.cache_data(ttl=3600)
def compute_pairs_model(n):
    return pairs_model(n), parity_binomial(n)


@st.cache_data(ttl=3600)
def compute_printed_lines_report():
    return printed_lines_report()
