"""CSV导出测试"""
from pathlib import Path

from irsa_aoi_sim.models.access_data import ResultRecord
from irsa_aoi_sim.utils.data_exporter import (
    RECORD_COLUMNS,
    RecordCsvWriter,
    format_value,
    read_records_csv,
    summary_path_for,
)


def make_record(**changes):
    fields = dict(protocol='irsa', U=4000, m=100, target_load=0.66, seed=1, measured_frames=1000,
                  throughput=0.6412345678912, avg_network_aoi=6284.1, normalized_aoi=1.571025,
                  realized_load=0.6601, ps_estimate=0.97, analytic_aoi=None, wall_time_seconds=1.25)
    fields.update(changes)
    return ResultRecord(**fields)


def test_format_value():
    assert format_value(None) == ''
    assert format_value(0.6412345678912) == '0.6412345679'
    assert format_value(float('inf')) == 'inf'
    assert format_value(True) == '1'
    assert format_value(4000) == '4000'


def test_summary_path():
    assert summary_path_for(Path('out/results.csv')) == Path('out/results_summary.csv')
    assert summary_path_for(Path('results')) == Path('results_summary.csv')


def test_record_writer_without_timing(tmp_path):
    path = tmp_path / 'nested' / 'results.csv'
    with RecordCsvWriter(path) as writer:
        writer.write(make_record())
    lines = path.read_text(encoding='utf-8').splitlines()
    assert lines[0] == ','.join(RECORD_COLUMNS)
    assert lines[1].startswith('irsa,4000,100,0.66,1,1000,0.6412345679,')
    assert lines[1].endswith(',0.97,')


def test_record_writer_with_timing(tmp_path):
    path = tmp_path / 'results.csv'
    with RecordCsvWriter(path, include_timing=True) as writer:
        writer.write(make_record())
    header, row = path.read_text(encoding='utf-8').splitlines()
    assert header.endswith(',wall_time_seconds')
    assert row.endswith(',1.25')


def test_results_can_be_read_back(tmp_path):
    path = tmp_path / 'results.csv'
    with RecordCsvWriter(path) as writer:
        writer.write(make_record(analytic_aoi=6250.5))
    [record] = read_records_csv(path)
    assert record.protocol == 'irsa'
    assert record.U == 4000
    assert record.analytic_aoi == 6250.5
    assert record.wall_time_seconds == 0.0
