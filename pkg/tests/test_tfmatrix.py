import pytest
from gmpy2 import mpq

from distdecomp.errors import RankDeficientError, StructuralSingularityError
from distdecomp.ratpoly import RationalFunction, exact, z
from distdecomp.tfmatrix import (PartitionedTransferMatrix, diag, f_transform, lambda_closure, lft_eval,
                                 lft_symbolic_numerator_scan, properness_report)
from distdecomp.zoo import catalog_get, diging_matrix, eq2_estimator

A = exact("0.1")


def test_lambda_zero_gives_block11():
    H = diging_matrix(A)
    assert lft_eval(H, 0) == -A / (z - 1)


@pytest.mark.parametrize("lam", ["0.1", "0.3", "-0.2", "0.2+0.1j"])
def test_first_order_estimator_closure(lam):
    lam = exact(lam)
    g = lft_eval(eq2_estimator(), lam)
    # hand algebra: 1 - lam/(z-1) / (1 + lam/(z-1)) = (z-1)/(z-1+lam)
    expected = (z - 1) / (z - 1 + lam)
    assert g == expected
    for p in (mpq(3), mpq(-2, 3), mpq(5, 2), mpq(7), mpq(1, 9)):
        assert complex(g(p)) == pytest.approx(complex(expected(p)))


def test_severed_feedback_path():
    M = PartitionedTransferMatrix.from_blocks(1 / (z - 2), [0], [z / (z - 3)], [[1 / z]])
    assert lft_eval(M, exact("0.4")) == 1 / (z - 2)


def test_closure_record():
    c = lambda_closure(eq2_estimator(), exact("0.5"))
    assert c.result == (z - 1) / (z - exact("0.5"))


def test_structural_singularity():
    M = PartitionedTransferMatrix.from_blocks(RationalFunction.const(1), [1], [1], [[RationalFunction.const(2)]])
    with pytest.raises(StructuralSingularityError):
        lft_eval(M, exact("0.5"))


def test_numerator_scan_first_order():
    out = lft_symbolic_numerator_scan(eq2_estimator(), [exact("0.1"), exact("0.2+0.1j"), exact("-0.05")])
    assert [k for _, k in out] == [1, 1, 1]
    assert lft_symbolic_numerator_scan(eq2_estimator(), [0])[0][1] == 0


def test_numerator_scan_extra_double_zero():
    G = catalog_get("extra_estimator").build
    assert lft_symbolic_numerator_scan(G, [exact("0.1")])[0][1] == 2


def test_identity_transform_is_noop():
    G = eq2_estimator()
    assert f_transform(G, diag(1)).entries == G.entries


def test_diging_transform_to_comparison_form():
    G = catalog_get("diging_estimator").build
    T = f_transform(G, diag(z, -A * z / (z - 1)))
    m1 = -1 / (z - 1)
    assert T.entries == ((1, m1, m1), (1, m1, m1), (1, 0, m1))


def test_scalar_transform_rescales_channels():
    G = eq2_estimator()
    T = f_transform(G, diag(2))
    assert T.b12[0] == G.b12[0] / 2 and T.b21[0] == G.b21[0] * 2
    lam = exact("0.3")
    assert lft_eval(T, lam) == lft_eval(G, lam)


def test_transform_then_inverse_restores():
    G = catalog_get("diging_estimator").build
    F = diag(z, (z - 1) / (z + 2))
    Finv = diag(1 / z, (z + 2) / (z - 1))
    assert f_transform(f_transform(G, F), Finv).entries == G.entries


def test_rank_deficient_transform():
    G = catalog_get("diging_estimator").build
    with pytest.raises((RankDeficientError, ZeroDivisionError)):
        f_transform(G, [[1, 1], [1, 1]])


def test_properness_diging():
    rep = properness_report(diging_matrix(A))
    assert rep.proper and rep.block22_strict and rep.cross_strict and rep.algorithm_ok


def test_properness_eq2():
    rep = properness_report(eq2_estimator())
    assert rep.estimator_ok


def test_properness_flags_improper():
    M = PartitionedTransferMatrix.from_blocks(z, [1 / z], [1], [[1 / z]])
    rep = properness_report(M)
    assert not rep.proper and rep.improper_entries


def test_json_round_trip():
    H = diging_matrix(A)
    assert PartitionedTransferMatrix.from_json(H.to_json()).entries == H.entries


def test_block_shapes_enforced():
    with pytest.raises(ValueError):
        PartitionedTransferMatrix.from_json({"m": 2, "blocks": {"11": {"num": ["1"], "den": ["1"]},
                                                                "12": [{"num": ["1"], "den": ["1"]}],
                                                                "21": [], "22": []}})


def test_derivative_at_zero_is_cross_term():
    H = diging_matrix(A)
    h = exact("1/1000000")
    for p in (mpq(3), mpq(-2), GaussianRational_point()):
        fd = (complex(lft_eval(H, h)(p)) - complex(lft_eval(H, 0)(p))) / float(h)
        cross = sum(complex((a * b)(p)) for a, b in zip(H.b12, H.b21))
        assert fd == pytest.approx(cross, rel=1e-5, abs=1e-6)


def GaussianRational_point():
    return exact("1.5+0.5j")
