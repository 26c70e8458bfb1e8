"""
Shared strategies for the property tests
"""

from hypothesis import HealthCheck, settings, strategies as st

from app.zalgebra import LETTERS, FuncMonomial, monomial

# sympy arithmetic is slow; keep example counts modest
settings.register_profile(
    "podles",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("podles")


@st.composite
def monomials(draw, max_degree: int = 3) -> FuncMonomial:
    m = draw(st.integers(0, max_degree))
    if m:
        a, b = draw(st.sampled_from([(k, 0) for k in range(max_degree + 1)] + [(0, k) for k in range(1, max_degree + 1)]))
    else:
        a = draw(st.integers(0, max_degree))
        b = draw(st.integers(0, max_degree))
    return FuncMonomial(m, a, b)


@st.composite
def functions(draw, max_terms: int = 3, max_degree: int = 2):
    """Small integer combinations of canonical monomials"""
    total = monomial(0, 0, 0, 0)
    for mono in draw(st.lists(monomials(max_degree), min_size=1, max_size=max_terms)):
        total = total + monomial(*mono, coeff=draw(st.integers(-3, 3)))
    return total


words = st.lists(st.sampled_from(LETTERS), min_size=0, max_size=5).map(tuple)
