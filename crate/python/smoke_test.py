"""Smoke test for the pyquiver extension module."""

import math

import pyquiver


def main():
    k3 = pyquiver.Quiver("vertices: 1 2\narrow: 1 2 x3\n")
    assert k3.vertices == ["1", "2"]
    assert k3.classify() == "Wild"
    lam = k3.cartan_spectrum()
    assert abs(lam[0] + 1) < 1e-9 and abs(lam[1] - 5) < 1e-9

    assert k3.euler_form([1, 1], [0, 1]) == -2
    assert k3.embeds([1, 2], [2, 3])
    assert not k3.embeds([1, 1], [2, 3])
    assert k3.general_subreps([2, 3]) == [
        [0, 0], [0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3],
    ]

    assert k3.epsilon([1, 1], "1/2") == ("3", [0, 1])
    assert k3.epsilon([1, 1], "1/4", which="opt") == ("Unconstrained", None)
    assert k3.expander_exists([1, 1], "1/2", "7/2") == (False, [0, 1])

    cert = k3.certificate([1, 1])
    assert cert["valid"] and cert["c_constant"] == 1.0

    cox = k3.coxeter()
    assert cox["phi_inv"] == [[-1, 3], [-3, 8]]
    assert abs(cox["rho"] - (7 + math.sqrt(45)) / 2) < 1e-9
    assert k3.tau_orbit("2", 2) == [[0, 1], [3, 8], [21, 55]]

    assert abs(pyquiver.kronecker_zeta(3, 1.0, 0.5) - 0.3820) < 1e-4
    assert abs(pyquiver.kronecker_epsilon_bound(3, 1, 1, 0.5) - 0.1604) < 1e-4

    rep = pyquiver.verify_appendix_lemma(4, 200, 7)
    assert rep["passed"] == 200 and rep["worst_margin"] > 0

    found = k3.sample_has_subrep([2, 3], [0, 1], p=101, seed=0, n_samples=5)
    assert found == [True] * 5

    try:
        pyquiver.Quiver("vertices: 1 2\narrow: 1 2\narrow: 2 1\n")
    except pyquiver.QuiverError as exc:
        assert str(exc).startswith("CyclicQuiver")
    else:
        raise AssertionError("cycle accepted")

    small = pyquiver.Quiver("vertices: 1 2\narrow: 1 2 x3\n", lattice_budget=10)
    try:
        small.general_subreps([5, 5])
    except pyquiver.BudgetError:
        pass
    else:
        raise AssertionError("budget not enforced")

    assert pyquiver.Quiver.kronecker(2).classify() == "ExtendedDynkin"
    print("pyquiver smoke test: ok")


if __name__ == "__main__":
    main()
