"""Smoke test for the pyrosen extension module.

Build and install first:  maturin build --release -m crates/python/Cargo.toml -o dist && pip install dist/pyrosen-*.whl
"""

import math

import pyrosen


def check(name, cond, detail=""):
    print(f"[{'ok' if cond else 'FAIL'}] {name} {detail}")
    if not cond:
        raise SystemExit(1)


ring = pyrosen.Ring(5)
check("ring", ring.degree == 2 and abs(ring.lambda_value - (1 + math.sqrt(5)) / 2) < 1e-12, repr(ring))
check("exact compare", ring.compare("1/3", "0.3333333333333333") == 1)

e = pyrosen.expand("0.4", k=3, n=5)
check("worked example", e.digits[0] == (1, 3) and e.convergents[1] == ("1", "3") and abs(e.thetas[0] - 0.6) < 1e-12, repr(e))
bounds = e.check_bounds()
check("denominator bounds", bounds["failures"] == [], str(bounds["checked"]))

a = pyrosen.expand("0.123456789", alpha="1/2", n=20)
r = pyrosen.expand("0.123456789", k=3, n=20)
check("alpha 1/2 = k 3", a.digits == r.digits)

c = pyrosen.constants(4)
check("constants", abs(c["lenstra_target"] - (math.sqrt(2) - 1)) < 1e-12)

h = pyrosen.entropy(k=4, samples=8, iters=2000, seed=1)
check("entropy", abs(h["h_hat"] - c["entropy_target"]) < 0.15, f"{h['h_hat']:.3f}")

cdf = pyrosen.theta_cdf(k=4, samples=200, iters=30, step=0.05)
check("theta cdf", all(x <= y for x, y in zip(cdf["mass"], cdf["mass"][1:])))

cnt = pyrosen.count("0.1234", ["0.25"], [10, 100], k=3)
check("count", cnt["counts"][0][0]["lo"] <= cnt["counts"][0][1]["lo"], str(cnt["counts"]))

pts = pyrosen.cusps("5", "0", "1", k=4)
check("cusps", len(pts) > 3 and all(0 <= v < 1 for _, _, v in pts), str(len(pts)))

check("t0", pyrosen.t0(k=3, probe_bound=10)["t0"] == 0.5)

le = c["lenstra_target"]
scan = pyrosen.legendre_scan([0.9 * le, 1.3 * le], k=4, q_bound=60, samples=100, seed=3, max_digit=8)
check("legendre scan", scan["rows"][0]["violations"] == 0 and scan["replayed"], str([r["violations"] for r in scan["rows"]]))

out = pyrosen.run("expand", k=3, x="0.4", iters=3)
check("run", out["manifest"]["exit_code"] == 0 and [r["digit"] for r in out["rows"]] == ["+3", "-2"])

try:
    pyrosen.expand("0.9", k=3)
    check("domain error", False)
except ValueError as err:
    check("domain error", True, str(err))

print("smoke test passed")
