import math

from cursedsig import (BlockStats, BlockStatsError, DegenerateSampleError, binary_moments, confidence_interval,
                       load_block_stats, load_bundled_block_stats, one_sample_t, prediction_report)
from cursedsig._experiment import format_p
import numpy as np
import pytest

# Two-tailed p-values against the intuitive-criterion prediction as reported;
# 'All' marks the pooled row.
REPORTED = {
    ('SIG2', 'high'): ['<0.001', '<0.001', '0.002', '<0.001', '0.002', '<0.001', '<0.001'],
    ('SIG2', 'low'): ['0.023', '0.002', '0.161', '0.324', '0.044', '---', '<0.001'],
    ('SIG3', 'high'): ['0.001', '<0.001', '0.011', '0.012', '0.006', '0.011', '<0.001', '0.023', '<0.001'],
    ('SIG3', 'low'): ['0.083', '0.162', '0.012', '0.022', '0.162', '0.326', '0.327', '0.162', '<0.001'],
}


def reported_cells():
    for (treatment, worker_type), column in REPORTED.items():
        blocks = list(range(1, len(column))) + [None]
        for block, value in zip(blocks, column):
            yield treatment, block, worker_type, value


def report_by_cell(chi=None):
    return {(r.stats.treatment, r.stats.block, r.stats.worker_type): r
            for r in prediction_report(load_bundled_block_stats(), chi)}


def test_bundled_tables():
    cells = load_bundled_block_stats()
    assert len(cells) == 14 + 18
    assert sum(c.block is None for c in cells) == 4
    assert {c.label for c in cells if c.block is None} == {
        'SIG2 block All high', 'SIG2 block All low', 'SIG3 block All high', 'SIG3 block All low'}


@pytest.mark.parametrize('treatment, block, worker_type, reported', list(reported_cells()))
def test_reported_p_values(treatment, block, worker_type, reported):
    row = report_by_cell()[(treatment, block, worker_type)]
    if reported == '---':
        assert row.p_intuitive is None
        assert row.intuitive_equal
    elif reported == '<0.001':
        assert row.p_intuitive < 0.001
        assert format_p(row.p_intuitive) == '<0.001'
    else:
        assert abs(row.p_intuitive - float(reported)) <= 0.001


def test_exact_binary_moments():
    assert binary_moments(22, 0.091) == (2, 2 / 22, pytest.approx(math.sqrt(2 * 20 / (22 * 21))))
    row = report_by_cell()[('SIG3', 2, 'low')]
    assert row.exact_moments
    assert row.p_intuitive == pytest.approx(0.162, abs=5e-4)


def test_one_sample_t():
    result = one_sample_t(0.5, 0.5, 101, 0.5)
    assert result.t == 0
    assert result.df == 100
    assert result.p == 1
    # t = 1 with one degree of freedom is the Cauchy quartile.
    result = one_sample_t(1.0, math.sqrt(2), 2, 0.0)
    assert result.t == pytest.approx(1)
    assert result.p == pytest.approx(0.5)


def test_one_sample_t_errors():
    with pytest.raises(DegenerateSampleError) as e_info:
        one_sample_t(0.0, 0.0, 38, 0.0)
    assert e_info.match('zero standard deviation')
    with pytest.raises(ValueError) as e_info:
        one_sample_t(0.5, 0.5, 1, 0.0)
    assert e_info.match('at least two')
    with pytest.raises(ValueError):
        one_sample_t(0.5, -0.1, 10, 0.0)


def test_confidence_interval():
    lo, hi = confidence_interval(0.5, 0.5, 101)
    half = 1.983971519 * 0.5 / math.sqrt(101)
    assert lo == pytest.approx(0.5 - half, abs=1e-8)
    assert hi == pytest.approx(0.5 + half, abs=1e-8)


def test_zero_variance_cell_is_compared_exactly():
    row = report_by_cell(0.7)[('SIG2', 6, 'low')]
    assert row.p_intuitive is None and row.intuitive_equal
    assert row.cursed_prediction == 0
    assert row.p_cursed is None and row.cursed_equal


def test_cursed_prediction_fits_the_late_high_block():
    row = report_by_cell(0.7)[('SIG2', 6, 'high')]
    assert row.cursed_prediction == pytest.approx(2 / 3)
    assert row.p_cursed > 0.05
    assert abs(row.p_cursed - 0.92) <= 0.02
    assert row.p_intuitive < 0.001


def test_prediction_rows_without_chi():
    for row in prediction_report(load_bundled_block_stats()):
        assert row.cursed_prediction is None
        assert row.p_cursed is None
        assert row.ci_lo <= row.mean <= row.ci_hi


def test_format_p():
    assert format_p(None) == '---'
    assert format_p(0.0004) == '<0.001'
    assert format_p(0.1614) == '0.161'


def test_block_stats_validation():
    with pytest.raises(ValueError) as e_info:
        BlockStats('SIG4', 1, 'high', 10, 0.5, 0.5)
    assert e_info.match('treatment')
    with pytest.raises(ValueError) as e_info:
        BlockStats('SIG2', 1, 'high', 10, 1.5, 0.5)
    assert e_info.match('investment rate')


def test_loader_errors(tmp_path):
    path = tmp_path / 'cells.csv'
    path.write_text('treatment,block,worker,n,mean,sd\n')
    with pytest.raises(BlockStatsError) as e_info:
        load_block_stats(path)
    assert e_info.match(':1:')
    path.write_text('treatment,block,worker_type,n,mean,sd\nSIG2,1,high,37,0.378,0.492\nSIG2,2,high,41,0.634\n')
    with pytest.raises(BlockStatsError) as e_info:
        load_block_stats(path)
    assert e_info.match(':3:')
    path.write_text('treatment,block,worker_type,n,mean,sd\nSIG2,1,high,many,0.378,0.492\n')
    with pytest.raises(BlockStatsError) as e_info:
        load_block_stats(path)
    assert e_info.match(':2:')


def test_empty_file(tmp_path):
    path = tmp_path / 'empty.csv'
    path.write_text('')
    assert load_block_stats(path) == []
    assert prediction_report([]) == []


def test_single_observation_cell():
    [row] = prediction_report([BlockStats('SIG3', 1, 'low', 1, 0.0, 0.0)], 0.2)
    assert row.p_intuitive is None
    assert row.ci_lo == row.ci_hi == 0
    assert np.isclose(row.cursed_prediction, 0)
