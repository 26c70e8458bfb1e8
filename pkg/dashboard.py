from __future__ import annotations

import requests
import streamlit as st
import plotly.graph_objects as go
from datetime import datetime

from app.settings import get_settings

# Page configuration
st.set_page_config(
    page_title="Podles Sphere Engine",
    page_icon="🌐",
    layout="wide",
    initial_sidebar_state="collapsed"
)

# Custom CSS
st.markdown("""
    <style>
    :root {
        --primary: #1d3557;
        --secondary: #457b9d;
        --accent: #a8dadc;
        --text-light: #666666;
        --border-color: #e0e0e0;
    }

    .header-section {
        background: linear-gradient(135deg, var(--primary) 0%, var(--secondary) 100%);
        color: white;
        padding: 2.5rem 2rem;
        margin: -1rem -1rem 2rem -1rem;
    }

    .header-section h1 { font-size: 2.6rem; font-weight: 700; margin: 0; }
    .header-section p { font-size: 1.1rem; margin: 0.5rem 0 0 0; opacity: 0.95; }

    .section-header {
        font-size: 1.8rem;
        font-weight: 700;
        color: var(--primary);
        margin: 2.5rem 0 1.5rem 0;
        border-bottom: 2px solid var(--accent);
        padding-bottom: 0.5rem;
    }

    .metric-container {
        background: white;
        border: 1px solid var(--border-color);
        border-radius: 8px;
        padding: 1.5rem;
    }

    .metric-label {
        font-size: 0.85rem;
        font-weight: 600;
        color: var(--text-light);
        text-transform: uppercase;
        margin-bottom: 0.75rem;
    }

    .metric-value { font-size: 2.2rem; font-weight: 700; color: var(--primary); }
    </style>
""", unsafe_allow_html=True)

API_URL = get_settings().api_url
SUITES = ["all", "zalgebra", "calculus", "xi", "vfields", "pseudodiff", "integration", "suq2", "wpatch", "poisson"]
COMMANDS = ["normalize", "mul", "comm", "star", "d", "act", "integrate", "pb", "patch", "limit-classical"]

# Initialize session state
if "reports" not in st.session_state:
    st.session_state.reports = []
if "command_history" not in st.session_state:
    st.session_state.command_history = []

# Header
st.markdown("""
    <div class="header-section">
        <h1>🌐 Podles Sphere Engine</h1>
        <p>Exact normal ordering, calculus, integration and the classical limit, verified identity by identity</p>
    </div>
""", unsafe_allow_html=True)

# Command Section
st.markdown('<h2 class="section-header">🧮 Evaluate</h2>', unsafe_allow_html=True)

col_cmd, col_x, col_y = st.columns([1, 2, 2])
with col_cmd:
    command = st.selectbox("Command", COMMANDS, label_visibility="collapsed")
with col_x:
    first = st.text_input("Expression", placeholder="z*zb - q^-2*zb*z", label_visibility="collapsed")
with col_y:
    second = st.text_input("Second expression", placeholder="(mul, comm, act, pb)", label_visibility="collapsed")

if st.button("▶️ Run", use_container_width=True) and first:
    args = [first, second] if command in ("mul", "comm", "act", "pb") else [first]
    try:
        response = requests.post(f"{API_URL}/command", json={"command": command, "args": args, "flags": {}}, timeout=120)
        response.raise_for_status()
        result = response.json()
        st.session_state.command_history.append({"command": command, "args": args, "result": result, "timestamp": datetime.now()})
        if result.get("error"):
            st.error(f"❌ {result['error']['code']}: {result['error']['message']}")
        else:
            value = result["result"]
            st.success("✅ Done")
            st.code(value.get("text", value.get("value")) if isinstance(value, dict) else value)
            st.caption(f"Latency: {result['latency_ms']:.0f}ms")
    except requests.exceptions.ConnectionError:
        st.error("❌ Backend not running. Start with: `uvicorn app.main:app --reload`")
    except Exception as e:
        st.error(f"❌ Error: {str(e)}")

st.divider()

# Verification Section
st.markdown('<h2 class="section-header">🧪 Verification Suites</h2>', unsafe_allow_html=True)

col_suite, col_seed = st.columns([3, 1])
with col_suite:
    suite = st.selectbox("Suite", SUITES, label_visibility="collapsed")
with col_seed:
    seed = st.number_input("Seed", min_value=0, value=get_settings().seed, step=1)

if st.button("🚀 Verify", use_container_width=True):
    try:
        with st.spinner("🔍 Running identities... (pseudodiff and poisson take the longest)"):
            response = requests.get(f"{API_URL}/verify/{suite}", params={"seed": int(seed)}, timeout=600)
            response.raise_for_status()
            result = response.json()
        if result.get("error"):
            st.error(f"❌ {result['error']['code']}: {result['error']['message']}")
        else:
            st.session_state.reports.append({"suite": suite, "report": result["result"], "timestamp": datetime.now()})
            if result["exit_code"] == 0:
                st.success(f"✅ {result['result']['passed']} identities passed")
            else:
                st.warning(f"⚠️ {result['result']['failed']} identities failed")
    except requests.exceptions.Timeout:
        st.error("⏱️ Request timeout. Try a single suite.")
    except requests.exceptions.ConnectionError:
        st.error("❌ Backend not running. Start with: `uvicorn app.main:app --reload`")
    except Exception as e:
        st.error(f"❌ Error: {str(e)}")

if st.session_state.reports:
    latest = st.session_state.reports[-1]["report"]

    metric_col1, metric_col2, metric_col3 = st.columns(3)
    for col, label, value in (
        (metric_col1, "✅ Passed", latest["passed"]),
        (metric_col2, "❌ Failed", latest["failed"]),
        (metric_col3, "🎲 Seed", latest["seed"]),
    ):
        with col:
            st.markdown(f"""
                <div class="metric-container">
                    <div class="metric-label">{label}</div>
                    <div class="metric-value">{value}</div>
                </div>
            """, unsafe_allow_html=True)

    names = [s["suite"] for s in latest["suites"]]
    fig = go.Figure()
    fig.add_trace(go.Bar(name="passed", x=names, y=[s["passed"] for s in latest["suites"]], marker_color="#457b9d"))
    fig.add_trace(go.Bar(name="failed", x=names, y=[s["failed"] for s in latest["suites"]], marker_color="#e63946"))
    fig.update_layout(barmode="stack", title="Identities per suite", height=380)
    st.plotly_chart(fig, use_container_width=True)

    # Contour integrals of Xi around the north pole
    numeric = [
        row for s in latest["suites"] if s["suite"] == "poisson"
        for row in s["rows"] if row["identity"].startswith("contour Xi, r =")
    ]
    if numeric:
        radii = [float(row["identity"].split("=")[1]) for row in numeric]
        fig = go.Figure()
        fig.add_trace(go.Scatter(x=[r * r for r in radii], y=[row["value"][1] for row in numeric], mode="markers+lines", name="Im contour integral"))
        fig.add_trace(go.Scatter(x=[0.0], y=[-12.566370614359172], mode="markers", name="-4π", marker_symbol="x", marker_size=12))
        fig.update_layout(title="Contour integral of Xi on |w| = r against r²", xaxis_title="r²", height=380)
        st.plotly_chart(fig, use_container_width=True)

    for s in latest["suites"]:
        with st.expander(f"**{s['suite']}**: {s['passed']} passed, {s['failed']} failed, {s.get('skipped', 0)} skipped"):
            for row in s["rows"]:
                icon = {"pass": "✅", "skipped": "⏭️"}.get(row["status"], "❌")
                st.write(f"{icon} `{row['identity']}` ({row['anchor']})")
                if row.get("counterexample"):
                    st.code(row["counterexample"])
else:
    st.info("📝 No reports yet. Run a suite above!")

st.divider()

# Command History
st.markdown('<h2 class="section-header">📋 Command History</h2>', unsafe_allow_html=True)

if st.session_state.command_history:
    for i, entry in enumerate(st.session_state.command_history[::-1], 1):
        with st.expander(f"**{i}. {entry['command']} {' '.join(entry['args'])[:60]}**"):
            st.write(f"**Time:** {entry['timestamp'].strftime('%H:%M:%S')}")
            st.json(entry["result"])
else:
    st.info("📝 No commands yet.")
