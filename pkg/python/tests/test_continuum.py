import math

from cursedsig import (ContinuumModel, Schedule, incentive_check, ode_residual, pooling_education_bound,
                       schedule_table, separating_education, separating_schedule, separating_wage,
                       wage_compression_report)
import numpy as np
import pytest


def uniform_model():
    return ContinuumModel.from_mean(1.0, 2.0)


def test_from_mean_is_uniform_on_a_symmetric_support():
    model = uniform_model()
    assert (model.theta_min, model.theta_max, model.mean_theta) == (1, 3, 2)
    assert model.density().mean() == pytest.approx(2)


def test_mean_from_distribution():
    model = ContinuumModel(1.0, 3.0, distribution='triangular', shape=(0.0,))
    assert model.mean_theta == pytest.approx(5 / 3)
    assert ContinuumModel(1.0, 3.0, distribution='truncnorm').mean_theta == pytest.approx(2)


def test_given_mean_wins_with_a_warning():
    with pytest.warns(RuntimeWarning, match='using the given mean'):
        model = ContinuumModel(1.0, 3.0, 2.5)
    assert model.mean_theta == 2.5


def test_model_validation():
    with pytest.raises(ValueError) as e_info:
        ContinuumModel(2.0, 1.0)
    assert e_info.match('support')
    with pytest.raises(ValueError) as e_info:
        ContinuumModel(1.0, 3.0, distribution='pareto')
    assert e_info.match('unknown distribution')
    with pytest.warns(RuntimeWarning):
        with pytest.raises(ValueError):
            ContinuumModel(1.0, 3.0, 3.5)


def test_separating_education():
    model = uniform_model()
    assert separating_education(model, 0, 1) == 0
    assert separating_education(model, 0, 2) == pytest.approx(math.sqrt(1.5))
    assert separating_education(model, 1, 2.5) == 0
    with pytest.raises(ValueError) as e_info:
        separating_education(model, 0, 3.5)
    assert e_info.match('outside')


def test_education_scales_with_the_root_of_one_minus_chi():
    model = uniform_model()
    thetas = np.linspace(1, 3, 51)
    base = separating_schedule(model, 0).education(thetas)
    assert np.all(np.diff(base) > 0)
    for chi in (0.2, 0.5, 0.9):
        assert np.allclose(separating_schedule(model, chi).education(thetas), math.sqrt(1 - chi) * base,
                           rtol=0, atol=1e-14)


def test_separating_wage():
    model = uniform_model()
    assert separating_wage(model, 0, 2.7) == 2.7
    assert separating_wage(model, 1, 2.7) == 2
    assert separating_wage(model, 0.5, 1.5) == 1.75
    schedule = Schedule(model, 0.3)
    thetas = np.linspace(1, 3, 11)
    assert np.allclose(schedule.wage(thetas) - 0.3 * 2 - 0.7 * thetas, 0, atol=1e-15)


def test_pooling_education_bound():
    model = uniform_model()
    assert pooling_education_bound(model, 1) == 0
    assert pooling_education_bound(model, 0) == 1
    assert pooling_education_bound(model, 0.75) == pytest.approx(0.5)


@pytest.mark.parametrize('theta', [1.0, 1.37, 2.0, 2.5, 3.0])
@pytest.mark.parametrize('chi', [0, 0.5, 0.999])
def test_truth_telling_is_optimal_on_a_grid(theta, chi):
    check = incentive_check(uniform_model(), chi, theta)
    assert abs(check.best_type - theta) <= check.step + 1e-12
    assert check.advantage <= 1e-8 + check.step ** 2


def test_incentive_gain_shrinks_with_the_grid():
    model = uniform_model()
    coarse = incentive_check(model, 0.5, 1.37, 101)
    fine = incentive_check(model, 0.5, 1.37, 10 ** 4)
    # Grid points only approach the truthful payoff from below.
    assert coarse.advantage < fine.advantage <= 1e-12
    assert abs(fine.advantage) <= fine.step ** 2


def test_incentive_check_arguments():
    model = uniform_model()
    with pytest.raises(ValueError):
        incentive_check(model, 1, 2)
    with pytest.raises(ValueError) as e_info:
        incentive_check(model, 0.5, 2, grid_size=10)
    assert e_info.match('at least 100')


@pytest.mark.parametrize('chi', [0, 0.5, 0.9])
def test_ode_residual(chi):
    model = uniform_model()
    assert ode_residual(model, chi, np.linspace(1, 3, 1000)) <= 1e-6


def test_ode_residual_flags_a_flat_schedule():
    model = uniform_model()

    def pooled(theta):
        return 0.5, 2.0

    assert ode_residual(model, 0.5, np.linspace(1, 3, 100), pooled) == math.inf
    with pytest.raises(ValueError):
        ode_residual(model, 1, [2.0])


def test_wage_compression():
    model = uniform_model()
    rows = wage_compression_report(model, [0, 0.5, 1])
    assert [row['slope'] for row in rows] == [1, 0.5, 0]
    for row in rows:
        assert row['measured_slope'] == pytest.approx(row['slope'], abs=1e-12)
        assert row['pivot_theta'] == 2
        assert row['pivot_wage'] == pytest.approx(2, abs=1e-12)


def test_schedule_table():
    rows = schedule_table(uniform_model(), [0, 0.5], n_theta=5)
    assert len(rows) == 10
    assert list(rows[0]) == ['theta', 'chi', 'education', 'wage']
    assert rows[0]['education'] == 0
    assert rows[-1]['wage'] == pytest.approx(2.5)
