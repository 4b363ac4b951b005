"""Smoke test for the pyinfobound extension module.

Build with `maturin develop` (or copy the compiled cdylib next to this file
as pyinfobound.so) and run `python smoke_test.py`.
"""

import json
import math

import pyinfobound as ib


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def main():
    assert close(ib.q_function(0.0), 0.5)
    assert close(ib.dropout_eta(0.5, 2), 0.75)
    assert close(ib.tv_shifted_gaussians(2.0, 1.0), 1.0 - 2.0 * ib.q_function(1.0))

    net = ib.NetworkSpec([10, 1, 20, 2], regularization="dropout", delta=0.5)
    etas = net.site_coefficients()
    assert [t for _, t in etas] == ["exact"] * 3
    assert close(net.eta_product(), math.prod(v for v, _ in etas))
    noisy = ib.NetworkSpec([4, 3], regularization="noise", eps=1.0, act_sup=1.0)
    assert noisy.site_coefficients()[0][1] == "upper_bound"

    ch = ib.FiniteChannel.dropout(0.3, 1)
    assert ch.shape == (3, 3)
    assert abs(ch.eta_kl_bruteforce(400) - 0.7) < 5e-3
    assert close(ch.hellinger_lower_bound(), 0.7)

    assert close(ib.miub_dropout([0.0, 1.0, 2.0], 0.25), 1.5)
    assert close(ib.gibbs_bound(4.0, 0.0, 10, 0.5), 0.1)
    assert close(ib.finite_param_mi_ub([10, 20, 2], 2), 240 * math.log(2))

    mix = ib.GaussianMixture([0.5, 0.0], 1.0, 100)
    x, y = mix.sample(seed=7)
    assert len(x) == 100 and set(y) <= {-1, 1}
    w = mix.fit_mean(seed=7)
    assert close(w[0], sum(yi * xi[0] for xi, yi in zip(x, y)) / 100, 1e-14)

    res = mix.funnel_layer(depth=10, funnel_index=3, seed=42, datasets=20, stacks_per_dataset=20)
    assert res["l_star"] == 3, res["l_star"]

    gen, se = mix.gen_error(datasets=200, seed=1)
    assert abs(gen) - 3 * se <= mix.kl_bound(1.0)

    rows = ib.run_experiment(json.dumps({"kind": "table1", "seed": 42}))
    assert [r["l_star"] for r in rows] == [3, 5, 7]
    csv = ib.run_experiment_csv(json.dumps({"kind": "sdpi_table"}))
    assert csv.splitlines()[0].startswith("site,kind")

    try:
        ib.run_experiment(json.dumps({"kind": "table1"}))
    except ValueError as e:
        assert "seed" in str(e)
    else:
        raise AssertionError("missing seed accepted")

    print("pyinfobound smoke test passed")


if __name__ == "__main__":
    main()
