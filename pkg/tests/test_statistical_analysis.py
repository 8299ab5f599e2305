"""统计分析测试"""
import pytest

from irsa_aoi_sim.analysis.statistical_analysis import StatisticalAnalyzer
from irsa_aoi_sim.models.access_data import validate_distribution


@pytest.fixture
def analyzer():
    return StatisticalAnalyzer()


def test_sample_statistics(analyzer):
    data = [1.0, 2.0, 3.0, 4.0, 5.0]
    assert analyzer.calculate_mean(data) == 3.0
    assert analyzer.calculate_std_dev(data) == pytest.approx(1.5811388)
    assert analyzer.calculate_confidence_halfwidth(data) == pytest.approx(2.7764451 * 1.5811388 / 5 ** 0.5)


def test_single_replication_has_zero_spread(analyzer):
    summary = analyzer.summarize([4.2])
    assert summary == {'mean': 4.2, 'std_dev': 0.0, 'ci95': 0.0, 'count': 1}
    assert analyzer.summarize([]) == {}


def test_group_summary(analyzer):
    rows = [
        {'U': 10, 'aoi': 1.0},
        {'U': 10, 'aoi': 3.0},
        {'U': 20, 'aoi': 5.0},
    ]
    summary = analyzer.group_summary(rows, ['U'], ['aoi'])
    assert [entry['U'] for entry in summary] == [10, 20]
    assert summary[0]['aoi_mean'] == 2.0
    assert summary[0]['replications'] == 2
    assert summary[1]['aoi_std'] == 0.0


def test_goodness_of_fit(analyzer):
    dist = validate_distribution([(2, 0.5), (3, 0.5)])
    _, p_balanced = analyzer.degree_goodness_of_fit([2, 3] * 500, dist)
    _, p_skewed = analyzer.degree_goodness_of_fit([2] * 900 + [3] * 100, dist)
    assert p_balanced == pytest.approx(1.0)
    assert p_skewed < 1e-6
    single = validate_distribution([(3, 1.0)])
    assert analyzer.degree_goodness_of_fit([3, 3, 3], single) == (0.0, 1.0)


def test_relative_error(analyzer):
    assert analyzer.relative_error(0.70, 0.7) == pytest.approx(0.0)
    assert analyzer.relative_error(110.0, 100.0) == pytest.approx(0.1)
