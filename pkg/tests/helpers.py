"""测试辅助函数"""
import math
from itertools import combinations

from irsa_aoi_sim.models.access_data import FrameOccupancy


def random_frame(rng, frame_slots, num_users, max_degree):
    """随机小帧：每个用户 1..max_degree 个互不相同的时隙"""
    mapping = {}
    for user in range(num_users):
        degree = int(rng.integers(1, min(max_degree, frame_slots) + 1))
        mapping[user] = rng.choice(frame_slots, size=degree, replace=False).tolist()
    return FrameOccupancy.from_mapping(frame_slots, mapping)


def subframes(frame):
    """帧中所有用户子集构成的子帧（包括空帧）"""
    users = frame.transmissions
    return [FrameOccupancy(frame.frame_slots, tuple(subset))
            for size in range(len(users) + 1)
            for subset in combinations(users, size)]


def slot_frequency_bounds(degree, frame_slots, samples, sigmas=4.0):
    """时隙出现频率容许区间 d/m ± k·sqrt((d/m)(1−d/m)/N)"""
    p = degree / frame_slots
    half = sigmas * math.sqrt(p * (1.0 - p) / samples)
    return p - half, p + half


def mean_of(records, attribute):
    values = [getattr(r, attribute) for r in records]
    return math.fsum(values) / len(values) if values else float('nan')
