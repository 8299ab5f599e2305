"""报表与图表数据测试"""
import csv
import math

import pytest

from irsa_aoi_sim.analysis.aoi_models import at_irsa_aoi_approx
from irsa_aoi_sim.harness.experiment_runner import run_experiment
from irsa_aoi_sim.models.access_data import AnalyticInput, ExperimentSpec, Protocol, SimConfig
from irsa_aoi_sim.models.errors import ConfigurationError, MissingResultsError
from irsa_aoi_sim.reports.figure_data import (
    EXTENDED_USERS,
    FigureKind,
    THROUGHPUT_LOADS,
    analytic_rows,
    emit_fig_data,
    figure_experiments,
)
from irsa_aoi_sim.reports.table_report import deviation_percent, report_table1


def read_rows(path):
    with open(path, newline='', encoding='utf-8') as f:
        return list(csv.DictReader(f))


def test_table_reproduces_reference_row():
    text = report_table1(0.6849)
    for constant in ('2.7183', '1.4169', '1.3591', '0.9641', '0.6849'):
        assert constant in text
    assert '0.6849 (+0.0%)' in text


def test_table_flags_deviation():
    assert '0.7000 (+2.2%)' in report_table1(0.70)
    assert '(-2.2%)' in report_table1(0.67)
    assert deviation_percent(0.6849) == 0.0


def test_table_header_names_network():
    assert report_table1(0.6849).splitlines()[0] == 'Normalized network AoI Δ/U, U=45000, m=800'
    assert report_table1(0.7, num_users=10000, frame_slots=400).splitlines()[0].endswith('U=10000, m=400')


def test_figure_experiment_grids(x3):
    [throughput] = figure_experiments(FigureKind.THROUGHPUT_VS_LOAD, x3, total_frames=1000)
    assert throughput.base.protocol is Protocol.IRSA
    assert len(throughput.sweep_points()) == 21
    assert THROUGHPUT_LOADS[0] == 0.1 and THROUGHPUT_LOADS[-1] == 0.9

    aoi_specs = figure_experiments(FigureKind.AOI_VS_USERS, x3, total_frames=1000)
    assert [(s.base.protocol, s.base.frame_slots) for s in aoi_specs] == [
        (Protocol.SLOTTED_ALOHA, 1), (Protocol.IRSA, 100), (Protocol.IRSA, 400),
        (Protocol.AT_IRSA, 100), (Protocol.AT_IRSA, 400)]
    assert aoi_specs[0].base.total_frames == 100_000
    assert aoi_specs[4].base.target_load == 0.73

    analytic_specs = figure_experiments(FigureKind.ANALYTIC_VS_SIM, x3)
    assert all(s.base.protocol is Protocol.AT_IRSA for s in analytic_specs)
    assert FigureKind.parse('analytic-vs-sim') is FigureKind.ANALYTIC_VS_SIM
    with pytest.raises(ConfigurationError):
        FigureKind.parse('fig9')


def small_records(dist, protocol, loads=(0.3, 0.5)):
    base = SimConfig(num_users=100, frame_slots=20, target_load=loads[0], distribution=dist,
                     total_frames=300, seed=3, protocol=protocol)
    spec = ExperimentSpec(base=base, sweep_axes={'target_load': list(loads)}, replications=2)
    return run_experiment(spec)


def test_missing_results(x3, tmp_path):
    with pytest.raises(MissingResultsError):
        emit_fig_data(FigureKind.AOI_VS_USERS, [], tmp_path / 'fig.csv')
    at_irsa = small_records(x3, Protocol.AT_IRSA, loads=(0.5,))
    with pytest.raises(MissingResultsError):
        emit_fig_data(FigureKind.THROUGHPUT_VS_LOAD, at_irsa, tmp_path / 'fig.csv')


def test_throughput_figure(x3, tmp_path):
    path = emit_fig_data(FigureKind.THROUGHPUT_VS_LOAD, small_records(x3, Protocol.IRSA), tmp_path / 'fig2.csv')
    rows = read_rows(path)
    assert [float(r['target_load']) for r in rows] == [0.3, 0.5]
    for row in rows:
        load = float(row['target_load'])
        assert float(row['sa_throughput']) == pytest.approx(load * math.exp(-load), rel=1e-9)
        assert int(row['replications']) == 2
        assert 0 < float(row['irsa_throughput_mean']) <= load + 0.05


def test_aoi_figure(x3, tmp_path):
    records = small_records(x3, Protocol.IRSA, loads=(0.5,)) + small_records(x3, Protocol.AT_IRSA, loads=(0.5,))
    rows = read_rows(emit_fig_data(FigureKind.AOI_VS_USERS, records, tmp_path / 'fig3.csv'))
    assert [r['protocol'] for r in rows] == ['at-irsa', 'irsa']
    assert all(float(r['normalized_aoi_mean']) > 0 for r in rows)


def test_analytic_figure_pairs_values(x3, tmp_path):
    records = small_records(x3, Protocol.AT_IRSA, loads=(0.5,))
    with pytest.raises(ConfigurationError):
        emit_fig_data(FigureKind.ANALYTIC_VS_SIM, records, tmp_path / 'fig4.csv')
    path = emit_fig_data(FigureKind.ANALYTIC_VS_SIM, records, tmp_path / 'fig4.csv', x3, ps_trials=2000)
    row = read_rows(path)[0]
    assert int(row['U']) == 100
    simulated, analytic = float(row['simulated_aoi']), float(row['analytic_aoi'])
    assert float(row['relative_error']) == pytest.approx(abs(analytic - simulated) / simulated)
    assert float(row['analytic_normalized_aoi']) == pytest.approx(analytic / 100)


def test_analytic_figure_extends_to_large_networks(x3, tmp_path):
    records = small_records(x3, Protocol.AT_IRSA, loads=(0.5,))
    path = emit_fig_data(FigureKind.ANALYTIC_VS_SIM, records, tmp_path / 'fig4.csv', x3, ps_trials=2000)
    rows = read_rows(path)
    assert [int(r['U']) for r in rows] == [100] + list(EXTENDED_USERS)

    ps = float(rows[0]['ps_estimate'])
    for row in rows[1:]:
        users = int(row['U'])
        assert row['simulated_aoi'] == '' and row['relative_error'] == ''
        assert int(row['replications']) == 0
        assert float(row['ps_estimate']) == ps
        expected = at_irsa_aoi_approx(AnalyticInput(20, users, 0.5, ps))
        assert float(row['analytic_aoi']) == pytest.approx(expected, rel=1e-7)
        assert float(row['analytic_normalized_aoi']) == pytest.approx(expected / users, rel=1e-7)

    # U 很大时 Δ/U → 1/(2G*)
    assert float(rows[-1]['analytic_normalized_aoi']) == pytest.approx(1.0, rel=0.01)


def test_analytic_figure_skips_simulated_sizes(x3):
    records = small_records(x3, Protocol.AT_IRSA, loads=(0.5,))
    rows = analytic_rows(records, x3, ps_trials=2000, extended_users=(100, 400))
    assert [row[1] for row in rows] == [100, 400]
    assert rows[1][6] is None
