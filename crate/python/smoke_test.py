"""Smoke test for the flagpush_py extension.

Build first: maturin develop -m crates/python/Cargo.toml
"""

import json

import flagpush_py as fp


def main():
    ctx = fp.RootContext(3)
    assert ctx.rank == 3 and ctx.flag_dim == 3
    assert ctx.tower_pushforward("(t1+t2)^2*t1") == "-1"
    assert ctx.dd_pushforward("(t1+t2)^3", zero_c1=True) == "0"
    assert ctx.dd_pushforward("xi1^2*xi2", word=[2, 1, 2]) == ctx.tower_pushforward("xi1^2*xi2")

    alpha, betas = ctx.constants()
    assert alpha == "0" and betas == ["-1", "1"]

    p = ctx.poly("xi1 + e1", "xi")
    assert str(p * p) == str(p**2)
    assert (p - p).is_zero()

    assert fp.formula("t1", 2, "printed-minus") == ("1", "fundamental-class-multiple")
    assert fp.weighted_degree(3, "ones") == "6"
    assert fp.weighted_degree(3, "literal") == "0"
    assert fp.am_value(2, "1", "1", 10) == "1/10"
    assert fp.grassmann_ratio(2, 1, 5, 1) == "1/5"
    assert fp.gap_check("1/1000", 2) == ("1/2", True)
    assert fp.compose_cover("1", 1, 2)[0] == "1"

    report = json.loads(fp.audit([2], seed=42, samples=2))
    assert all(rec["verdict"] == "MATCH" for rec in report["records"])

    csv = fp.table_csv(2, "ones", [1, 2, 3], [1])
    assert csv.startswith("r,weights,m,n,degree_coefficient")

    cert = fp.certificate_from_table(3, "ones", list(range(1, 9)), 2, mu="1/3")
    status, gaps, constant = fp.check_certificate(cert)
    assert status == "HOLDS", gaps
    assert json.loads(fp.frobenius_scale(cert, 3, 2))["mu"] == "3"

    assert fp.example_surface_invariants("-1", "0") == ("1", "4", False, [])
    assert fp.example_surface_invariants("0", "1")[3]

    try:
        ctx.tower_pushforward("t1 + t9")
    except ValueError as e:
        assert "position" in str(e)
    else:
        raise AssertionError("parse error not raised")

    print("smoke test passed")


if __name__ == "__main__":
    main()
