"""Gallery address parsing and sizing."""
import numpy as np
import pytest

from expotrans.errors import InputError
from expotrans.gallery import OperatorFamily, b_for, names, resolve
from expotrans.shapes import Annulus, Disk, Ellipse, Weighted


def test_names_are_resolvable():
    got = names()
    assert len(got) == 8
    for name in got:
        entry = resolve(f"gallery:{name}")
        assert entry is not None


def test_shape_entries():
    d = resolve("gallery:disk?R=2&x=1")
    assert isinstance(d, Disk) and d.R == 2.0 and d.center == 1.0 + 0j
    a = resolve("annulus")
    assert isinstance(a, Annulus) and (a.r, a.R) == (0.5, 1.0)
    e = resolve("gallery:ellipse-shape?p=2&q=1&phi=0.5")
    assert isinstance(e, Ellipse) and e.phi == 0.5
    w = resolve("gallery:tdisk?t=0.25")
    assert isinstance(w, Weighted) and w.t == 0.25


def test_operator_entries():
    fam = resolve("gallery:trifoil")
    assert isinstance(fam, OperatorFamily)
    assert (fam.xi_index, fam.max_offset) == (1, 2)
    fam = resolve("gallery:power?d=3")
    assert (fam.xi_index, fam.max_offset) == (3, 4)
    fam = resolve("gallery:twodiag?A1=2&B1=1")
    op = fam.build(8)
    assert op.size == 8


def test_sized_for_rule():
    fam = resolve("gallery:trifoil")
    op = fam.sized_for(10)
    assert op.size == 1 + 10 * 2 + 2
    # the resulting operator always admits the requested Gram order
    from expotrans.operators import b_from_operator

    b = b_from_operator(op, 10)
    assert b.b.shape == (10, 10)


def test_bad_addresses():
    with pytest.raises(InputError):
        resolve("gallery:moebius")
    with pytest.raises(InputError):
        resolve("gallery:disk?radius=2")
    with pytest.raises(InputError):
        resolve("gallery:disk?R=abc")
    with pytest.raises(InputError):
        resolve("gallery:power?d=0")
    with pytest.raises(InputError):
        resolve("gallery:power?d=1.5")


def test_b_for_both_routes():
    b_shape = b_for("gallery:disk", 6).b
    assert b_shape.shape == (6, 6)
    assert abs(b_shape[0, 0] - 1.0) < 1e-12
    b_op = b_for("gallery:ellipse?u=2", 6).b
    assert abs(b_op[0, 0] - 3.0) < 1e-12
    assert np.max(np.abs(b_op - b_op.conj().T)) < 1e-12
