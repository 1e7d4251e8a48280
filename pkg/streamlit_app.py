import streamlit as st
from pathlib import Path

from services import settings
from services.errors import ToricError
from services.pipeline import load_model_text
from services.logger import setup_logger

logger = setup_logger(__name__)

DATA_DIR = Path(__file__).parent / "data"

# --- UI SETUP ---
st.set_page_config(page_title="Toric Explorer", layout="wide", initial_sidebar_state="expanded")

st.markdown("""
    <style>
    .main { background-color: #0e1117; }
    .stMetric { background-color: #1f2937; padding: 15px; border-radius: 10px; color: white !important; }
    .stMetric label { color: #9ca3af !important; }
    .stMetric div[data-testid="stMetricValue"] { color: white !important; }
    </style>
    """, unsafe_allow_html=True)

st.sidebar.title("Toric Explorer")

# --- MODEL SELECTION ---
model_files = sorted(p.name for p in DATA_DIR.glob("*.model") if not p.name.startswith("bad_"))
CUSTOM = "Custom..."

selected_file = st.sidebar.selectbox(
    "Model:",
    options=model_files + [CUSTOM],
    key="model_selector",
    help="Bundled model files, or paste your own.",
)

if selected_file == CUSTOM:
    model_text = st.sidebar.text_area(
        "Model file",
        value="var X1 2\nvar X2 2\nvar X3 2\nedge X1 X2\nedge X2 X3\n",
        height=200,
    )
else:
    model_text = (DATA_DIR / selected_file).read_text(encoding="utf-8")

# --- SETTINGS ---
st.sidebar.divider()
with st.sidebar.expander("⚙️ Budget"):
    st.caption("Limits for the Gröbner pipeline. Zero means unlimited.")
    seconds = st.number_input("Time budget (s)", min_value=0.0, value=float(settings.DEFAULT_BUDGET_SECONDS or 0))
    max_degree = st.number_input("Max S-pair degree", min_value=0, value=0, step=1)

budget = {
    "seconds": seconds or None,
    "max_degree": int(max_degree) or None,
}

try:
    spec = load_model_text(model_text)
except ToricError as e:
    logger.warning(f"Model did not load: {e}")
    st.error(f"⚠️ {e}")
    st.stop()

st.sidebar.caption(f"{spec.space.m} joint states, {'graph' if spec.is_graphical else 'log-linear'} model")

# --- MAIN NAVIGATION ---
TAB_LABELS = [
    "🧮 Model",
    "🔗 Markov Basis",
    "⚖️ Factorization",
    "🎲 Fiber Walk",
    "🧬 Pairs Model",
]

if 'active_view' not in st.session_state:
    st.session_state.active_view = TAB_LABELS[0]

active_view = st.pills(
    "Navigation",
    TAB_LABELS,
    label_visibility="collapsed",
    key='active_view',
)

st.divider()

# --- RENDER ACTIVE VIEW ---
if active_view == "🧮 Model":
    try:
        from views.model_view import render_model
        render_model(model_text, spec)
    except Exception as e:
        logger.error(f"Error rendering Model: {e}")
        st.error("⚠️ An error occurred. Please try again later.")

elif active_view == "🔗 Markov Basis":
    try:
        from views.basis_view import render_markov_basis
        render_markov_basis(model_text, spec, budget)
    except Exception as e:
        logger.error(f"Error rendering Markov Basis: {e}")
        st.error("⚠️ An error occurred. Please try again later.")

elif active_view == "⚖️ Factorization":
    try:
        from views.classify_view import render_classify
        render_classify(model_text, spec, budget)
    except Exception as e:
        logger.error(f"Error rendering Factorization: {e}")
        st.error("⚠️ An error occurred. Please try again later.")

elif active_view == "🎲 Fiber Walk":
    try:
        from views.fiber_view import render_fiber
        render_fiber(model_text, spec, budget)
    except Exception as e:
        logger.error(f"Error rendering Fiber Walk: {e}")
        st.error("⚠️ An error occurred. Please try again later.")

elif active_view == "🧬 Pairs Model":
    try:
        from views.constructions_view import render_constructions
        render_constructions()
    except Exception as e:
        logger.error(f"Error rendering Pairs Model: {e}")
        st.error("⚠️ An error occurred. Please try again later.")
