"""Network reliability: parsing, exact values, sampling laws, estimator mechanics."""

import numpy as np
import pytest

from matroid_mcmc import (
    ChainConfig,
    NetworkInstance,
    ValidationError,
    cographic_spec,
    exact_mu,
    failure_fields,
    parse_graph_file,
    rel_connected_subgraph,
    rel_estimate,
    rel_exact,
    rel_sample,
    tv_distance,
)
from matroid_mcmc.exact import empirical_distribution
from matroid_mcmc.sampling import sample_independent_sets

from conftest import K4_EDGES, TRIANGLE_EDGES, masks_of

TRI = NetworkInstance(3, list(TRIANGLE_EDGES), 0.5)
K4 = NetworkInstance(4, list(K4_EDGES), 0.5)


# ---------------------------------------------------------------------------
# parsing


def _write(tmp_path, text):
    p = tmp_path / "g.txt"
    p.write_text(text)
    return str(p)


def test_parse_round_trip(tmp_path):
    path = _write(tmp_path, "3 3\n0 1 0.5\n1 2 0.25\n0 2 0.75\n")
    inst = parse_graph_file(path)
    assert inst.vertices == 3
    assert inst.edges == [(0, 1), (1, 2), (0, 2)]
    assert inst.p == [0.5, 0.25, 0.75]


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("3\n", 1),
    ("x y\n", 1),
    ("0 1\n", 1),
    ("2 1\n0 1\n", 2),
    ("2 1\n0 1 zebra\n", 2),
    ("2 1\n0 2 0.5\n", 2),
    ("2 1\n0 1 0.0\n", 2),
    ("2 1\n0 1 1.0\n", 2),
    ("2 1\n0 1 nan\n", 2),
    ("2 2\n0 1 0.5\n", 3),           # missing edge line
    ("2 1\n0 1 0.5\ntrailing\n", 3),  # junk after the edges
])
def test_parse_errors_carry_line_numbers(tmp_path, text, line):
    path = _write(tmp_path, text)
    with pytest.raises(ValidationError) as exc:
        parse_graph_file(path)
    assert f":{line}:" in str(exc.value)


def test_parse_fuzz_never_crashes(tmp_path):
    rng = np.random.default_rng(0)
    base = "3 3\n0 1 0.5\n1 2 0.25\n0 2 0.75\n"
    alphabet = "0123456789. \n-+eXnaqz"
    for trial in range(300):
        chars = list(base)
        for _ in range(int(rng.integers(1, 6))):
            pos = int(rng.integers(len(chars)))
            chars[pos] = alphabet[int(rng.integers(len(alphabet)))]
        path = _write(tmp_path, "".join(chars))
        try:
            inst = parse_graph_file(path)
            assert inst.vertices >= 1
        except ValidationError:
            pass  # rejection is fine; crashing is not


def test_instance_validation():
    with pytest.raises(ValidationError):
        NetworkInstance(0, [], [])
    with pytest.raises(ValidationError):
        NetworkInstance(2, [(0, 5)], [0.5])
    with pytest.raises(ValidationError):
        NetworkInstance(2, [(0, 1)], [1.5])
    with pytest.raises(ValidationError):
        cographic_spec(NetworkInstance(3, [(0, 1)], [0.5]))  # disconnected


# ---------------------------------------------------------------------------
# exact reliability


def test_rel_exact_frozen_values():
    assert rel_exact(NetworkInstance(2, [(0, 1)], 0.3)) == pytest.approx(0.7)
    assert rel_exact(TRI) == pytest.approx(0.5)
    assert rel_exact(K4) == pytest.approx(38 / 64)


def test_rel_exact_with_self_loop():
    inst = NetworkInstance(2, [(0, 1), (1, 1)], [0.3, 0.9])
    assert rel_exact(inst) == pytest.approx(0.7)  # the loop never matters


def test_rel_exact_size_guard():
    from matroid_mcmc import SizeLimitError
    edges = [(0, 1)] * 25
    with pytest.raises(SizeLimitError):
        rel_exact(NetworkInstance(2, edges, [0.5] * 25))


# ---------------------------------------------------------------------------
# sampling laws


def test_failure_fields_values():
    inst = NetworkInstance(3, list(TRIANGLE_EDGES), [0.75, 0.25, 0.25])
    f = failure_fields(inst)
    assert f.lam == pytest.approx([3.0, 1 / 3, 1 / 3])


def test_rel_sample_single_edge_always_empty():
    inst = NetworkInstance(2, [(0, 1)], 0.4)
    for seed in range(5):
        assert rel_sample(inst, 0.2, seed=seed) == []
        assert rel_connected_subgraph(inst, 0.2, seed=seed) == [0]


def test_rel_sample_triangle_uniform_law():
    spec = cographic_spec(TRI)
    fields = failure_fields(TRI)
    cfg = ChainConfig(epsilon=0.05, seed=77)
    samples, _ = sample_independent_sets(spec, fields, cfg, 40_000)
    emp = empirical_distribution(masks_of(samples))
    exact = exact_mu(spec, fields)
    assert tv_distance(emp, exact) <= 0.02


def test_rel_sample_weighted_triangle_law():
    # p = (3/4, 1/4, 1/4)  =>  lambda = (3, 1/3, 1/3); mass ratio 1 : 3 : 1/3 : 1/3
    inst = NetworkInstance(3, list(TRIANGLE_EDGES), [0.75, 0.25, 0.25])
    exact = exact_mu(cographic_spec(inst), failure_fields(inst))
    want = {0b000: 3 / 14, 0b001: 9 / 14, 0b010: 1 / 14, 0b100: 1 / 14}
    for m, p in want.items():
        assert exact.prob_of(m) == pytest.approx(p, rel=1e-12)
    cfg = ChainConfig(epsilon=0.05, seed=3)
    samples, _ = sample_independent_sets(cographic_spec(inst), failure_fields(inst),
                                         cfg, 40_000)
    assert tv_distance(empirical_distribution(masks_of(samples)), exact) <= 0.02


def test_connected_subgraph_is_complement():
    got = rel_connected_subgraph(TRI, 0.1, seed=11)
    fail = rel_sample(TRI, 0.1, seed=11)
    assert sorted(got + fail) == [0, 1, 2]


# ---------------------------------------------------------------------------
# estimator


def test_estimate_single_edge_exact():
    est = rel_estimate(NetworkInstance(2, [(0, 1)], 0.3), 0.1, 0.05, seed=0)
    assert est.z_hat == pytest.approx(0.7, abs=1e-12)
    assert len(est.trace) == 1
    assert est.trace[0]["branch"] == "contract"


def test_estimate_trace_invariants():
    est = rel_estimate(K4, 0.2, 0.2, seed=4, c0=1.0)
    assert len(est.trace) == K4.m
    assert 0.0 < est.z_hat <= 1.0
    for entry in est.trace:
        assert entry["branch"] in ("delete", "contract", "loop")
        if entry["branch"] == "loop":
            assert entry["marginal"] is None


def test_estimate_triangle_within_tolerance():
    for seed in (0, 1, 2):
        est = rel_estimate(TRI, 0.1, 0.05, seed=seed)
        assert 1 / 1.15 <= est.z_hat / 0.5 <= 1.15, (seed, est.z_hat)


def test_estimate_deterministic():
    a = rel_estimate(TRI, 0.15, 0.1, seed=9)
    b = rel_estimate(TRI, 0.15, 0.1, seed=9)
    assert a.z_hat == b.z_hat
    assert a.trace == b.trace


def test_bridges_always_contract():
    # every edge of a path is a bridge: the failed-set marginal is exactly 0,
    # so the deletion branch must never fire regardless of p
    inst = NetworkInstance(4, [(0, 1), (1, 2), (2, 3)], 0.9)
    est = rel_estimate(inst, 0.3, 0.3, seed=2, c0=0.5)
    assert [t["branch"] for t in est.trace] == ["contract"] * 3
    want = (1 - 0.9) ** 3
    assert est.z_hat == pytest.approx(want, abs=1e-12)


def test_telescoping_identity_with_exact_marginals():
    """Replace sampled marginals by exact ones: the product telescopes to Z."""
    for inst in (TRI, K4, NetworkInstance(3, list(TRIANGLE_EDGES), [0.75, 0.25, 0.25])):
        z = 1.0
        cur = inst
        while cur.m:
            exact = exact_mu(cographic_spec(cur), failure_fields(cur))
            # marginal of edge 0 failing
            q0 = sum(exact.prob_of(m) for m in exact.support if m & 1)
            pe = cur.p[0]
            u, v = cur.edges[0]
            rest = list(range(1, cur.m))
            if q0 >= 0.5:
                z *= pe / q0
                edges = [cur.edges[i] for i in rest]
                cur = NetworkInstance(cur.vertices, edges, [cur.p[i] for i in rest])
            else:
                z *= (1 - pe) / (1 - q0)
                # contract: relabel v as u, keep the rest
                def squash(w):
                    w = u if w == v else w
                    return w - 1 if w > v else w
                edges = [(squash(a), squash(b)) for a, b in
                         (cur.edges[i] for i in rest)]
                cur = NetworkInstance(cur.vertices - 1, edges,
                                      [cur.p[i] for i in rest])
            # drop self-loops created by the contraction
            keep = [i for i, (a, b) in enumerate(cur.edges) if a != b]
            cur = NetworkInstance(cur.vertices, [cur.edges[i] for i in keep],
                                  [cur.p[i] for i in keep])
        assert z == pytest.approx(rel_exact(inst), abs=1e-10)
