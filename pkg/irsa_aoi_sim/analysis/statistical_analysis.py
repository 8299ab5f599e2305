"""统计分析模块"""
import math
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy import stats

from irsa_aoi_sim.models.access_data import DegreeDistribution


class StatisticalAnalyzer:
    """仿真结果统计分析器"""

    def calculate_mean(self, data: Sequence[float]) -> float:
        """计算平均值"""
        return float(np.mean(data))

    def calculate_std_dev(self, data: Sequence[float]) -> float:
        """计算样本标准差（单个样本时为0）"""
        if len(data) < 2:
            return 0.0
        return float(np.std(data, ddof=1))

    def calculate_confidence_halfwidth(self, data: Sequence[float], level: float = 0.95) -> float:
        """
        Student-t 置信区间半宽

        Args:
            data: 各次重复实验的结果
            level: 置信水平

        Returns:
            半宽（单个样本时为0）
        """
        n = len(data)
        if n < 2:
            return 0.0
        quantile = stats.t.ppf(0.5 + level / 2.0, df=n - 1)
        return float(quantile * self.calculate_std_dev(data) / math.sqrt(n))

    def summarize(self, data: Sequence[float]) -> Dict[str, float]:
        """均值、样本标准差、95%置信半宽"""
        if not data:
            return {}
        return {
            'mean': self.calculate_mean(data),
            'std_dev': self.calculate_std_dev(data),
            'ci95': self.calculate_confidence_halfwidth(data),
            'count': len(data),
        }

    def degree_goodness_of_fit(self, samples: Sequence[int], dist: DegreeDistribution) -> Tuple[float, float]:
        """
        副本数样本对 Λ 的卡方拟合优度检验

        Returns:
            (卡方统计量, p值)
        """
        samples = np.asarray(samples)
        observed = np.array([np.count_nonzero(samples == d) for d in dist.degrees], dtype=float)
        expected = dist.probabilities * samples.size
        if len(dist.entries) == 1:
            return 0.0, 1.0 if observed[0] == samples.size else 0.0
        statistic, p_value = stats.chisquare(observed, expected)
        return float(statistic), float(p_value)

    def relative_error(self, value: float, reference: float) -> float:
        """|value − reference| / |reference|"""
        return abs(value - reference) / abs(reference)

    def group_summary(self, rows: List[Dict[str, float]], keys: Sequence[str],
                      metrics: Sequence[str]) -> List[Dict[str, float]]:
        """按 keys 分组，对 metrics 逐列求均值/标准差/置信半宽"""
        groups: Dict[tuple, List[Dict[str, float]]] = {}
        for row in rows:
            groups.setdefault(tuple(row[k] for k in keys), []).append(row)

        summary = []
        for group_key, members in groups.items():
            entry = dict(zip(keys, group_key))
            entry['replications'] = len(members)
            for metric in metrics:
                values = [r[metric] for r in members if r[metric] is not None]
                stats_row = self.summarize(values)
                entry[f'{metric}_mean'] = stats_row.get('mean')
                entry[f'{metric}_std'] = stats_row.get('std_dev')
                entry[f'{metric}_ci95'] = stats_row.get('ci95')
            summary.append(entry)
        return summary
