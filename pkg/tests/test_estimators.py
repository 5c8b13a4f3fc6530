import pytest
from conftest import random_form
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from ternary_waring import SylvesterDecomposer, WaringDecomposer
from ternary_waring.certify import Certificate
from ternary_waring.forms import variables
from ternary_waring.io import form_to_json


def test_params_round_trip():
    est = WaringDecomposer(seed=3, retry_h=50)
    assert est.get_params()["seed"] == 3 and est.get_params()["retry_h"] == 50
    est.set_params(tol=1e-8, absorb_weights=True)
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    assert "max_samples" in SylvesterDecomposer().get_params()


def test_single_form_fit_and_inverse():
    f = random_form(3, 4, "est")
    est = WaringDecomposer(seed=1).fit(f)
    assert est.n_forms_ == 1 and est.decomposition_.count <= 10
    assert isinstance(est.certificate_, Certificate)
    assert len(est.lines_) == 4
    assert est.inverse_transform(est.transform(f)).allclose(f.to_float(), rtol=1e-9)


def test_transform_before_fit():
    with pytest.raises(NotFittedError):
        WaringDecomposer().transform(random_form(3, 3, "nf"))


def test_batch_and_dict_input():
    forms = [random_form(3, d, ("batch-est", d)) for d in (2, 3, 5)]
    est = WaringDecomposer(seed=0)
    decs = est.fit_transform(forms)
    assert len(decs) == 3 and est.n_forms_ == 3
    assert not hasattr(est, "decomposition_")
    back = est.inverse_transform(decs)
    assert all(b.allclose(f.to_float(), rtol=1e-9) for b, f in zip(back, forms))
    again = est.transform([form_to_json(forms[1])])
    assert again[0] is decs[1]


def test_absorb_weights_param():
    f = random_form(3, 3, "est-abs")
    dec = WaringDecomposer(absorb_weights=True).fit_transform(f)
    assert all(complex(w) == 1 for w in dec.weights)


def test_bad_params_and_inputs():
    with pytest.raises(ValueError):
        WaringDecomposer(retry_h=0).fit(random_form(3, 3, "bad"))
    with pytest.raises(ValueError):
        WaringDecomposer(seed=-1).fit(random_form(3, 3, "bad"))
    with pytest.raises((TypeError, ValueError)):
        WaringDecomposer().fit(variables(2)[0] ** 3)


def test_sylvester_estimator():
    u, v = variables(2)
    est = SylvesterDecomposer(seed=0)
    decs = est.fit_transform([u * v, (u + v) ** 3, u * v ** 3])
    assert [d.count for d in decs] == [2, 1, 4]
    assert all(isinstance(c, Certificate) for c in est.certificates_)
