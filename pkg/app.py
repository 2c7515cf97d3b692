import streamlit as st
import os
import traceback

from processors.session_processor import SessionProcessor
from utils.config import get_settings
from utils.file_utils import format_duration, get_file_type, read_session, save_uploaded_file
from verify.fixtures import FIXTURE_RINGS

EXAMPLE_SESSION = """ring R = Q[x,y]/(x^2*y^2);
ideal I = (x^5, x*y^7) in R;
trace(I);
grade(I);
"""

# Initialize session state
if 'session_text' not in st.session_state:
    st.session_state.session_text = EXAMPLE_SESSION
if 'history' not in st.session_state:
    st.session_state.history = []

st.title("Trace Ideals and Rigidity Workbench")
st.markdown("Define rings, ideals and modules, then compute traces, Ext and rigidity or run a check census.")

# Sidebar: bounds and fixtures
with st.sidebar:
    st.header("Bounds")
    settings = get_settings()
    seed = st.number_input("Seed", min_value=0, value=settings.seed, step=1)
    jobs = st.number_input("Worker threads", min_value=1, value=settings.jobs, step=1)
    max_degree = st.number_input("Max degree", min_value=1, value=settings.max_degree, step=1)
    ext_bound = st.number_input("Ext bound", min_value=1, value=settings.ext_bound, step=1)
    dim_cap = st.number_input("Dimension cap", min_value=1, value=settings.dim_cap, step=1)

    st.markdown("---")
    st.header("Fixture rings")
    fixture = st.selectbox("Insert a fixture ring", ["(none)"] + list(FIXTURE_RINGS))
    if st.button("Insert", help="Append the fixture as ring S") and fixture != "(none)":
        st.session_state.session_text += f"\nring S = {FIXTURE_RINGS[fixture]};\n"
        st.rerun()

    uploaded = st.file_uploader("Load a session file", type=['trace', 'session', 'txt'])
    if uploaded is not None and get_file_type(uploaded.name) == 'session':
        try:
            temp_path = save_uploaded_file(uploaded)
            st.session_state.session_text = read_session(temp_path)
            if os.path.exists(temp_path):
                os.unlink(temp_path)
        except Exception as e:
            st.error(f"Error loading {uploaded.name}: {str(e)}")

    if st.button("Reset Session", help="Clear the script and the run history"):
        for key in list(st.session_state.keys()):
            del st.session_state[key]
        st.rerun()

# Main area: script and results
script = st.text_area("Session", value=st.session_state.session_text, height=220)
st.session_state.session_text = script

fmt = st.radio("Report format", ["text", "json"], horizontal=True)

if st.button("Run", type="primary"):
    if not script.strip():
        st.warning("The session is empty.")
    else:
        with st.spinner("Running session..."):
            try:
                processor = SessionProcessor(seed=int(seed), jobs=int(jobs), max_degree=int(max_degree),
                                             ext_bound=int(ext_bound), dim_cap=int(dim_cap))
                result = processor.process(script)
                st.session_state.history.insert(0, {'script': script, 'result': result, 'format': fmt})
            except Exception as e:
                st.error(f"Error running session: {str(e)}")
                st.error(traceback.format_exc())

if st.session_state.history:
    latest = st.session_state.history[0]
    result = latest['result']
    if result.exit_code == 0:
        st.success("Finished: exit code 0")
    elif result.exit_code == 1:
        st.warning("Finished with a counterexample (exit code 1)")
    else:
        st.error(f"Finished with exit code {result.exit_code}")

    for item in result.results:
        title = item.statement or "(parse)"
        with st.expander(f"{title}  [{item.kind}]", expanded=item.kind in ("error", "check")):
            if latest['format'] == 'json':
                st.json(item.to_dict())
            elif item.kind == "check":
                report = item.value
                st.text(report.summary())
                st.caption(f"{report.statement}  ({format_duration(report.wall_ms)})")
                if report.counterexamples:
                    st.json(report.counterexamples)
                if report.engine_disagreements:
                    st.json(report.engine_disagreements)
                if report.skipped:
                    st.json(report.skipped)
            elif item.kind == "error":
                st.error(item.value['error'])
            else:
                st.json(item.value)

# Statistics
if st.session_state.history:
    st.sidebar.markdown("---")
    st.sidebar.subheader("Statistics")
    st.sidebar.metric("Runs", len(st.session_state.history))
    checks = [r for run in st.session_state.history for r in run['result'].results if r.kind == "check"]
    st.sidebar.metric("Checks run", len(checks))
