"""
SIC 剥离译码模块

接收端缓存整帧后：找出单包时隙并译码，随后从该用户的所有副本时隙中
消去其信号，可能产生新的单包时隙；迭代直到全部译出或只剩碰撞时隙。
碰撞为破坏性：不考虑捕获效应，也不做部分译码。
"""
import heapq
from typing import FrozenSet, Optional, Set, TextIO

from irsa_aoi_sim.models.access_data import DecodeOutcome, FrameOccupancy, SlotCensus

ASCENDING = 'ascending'
DESCENDING = 'descending'


def _census_from_counts(counts) -> SlotCensus:
    idle = singleton = collided = 0
    for count in counts:
        if count == 0:
            idle += 1
        elif count == 1:
            singleton += 1
        else:
            collided += 1
    return SlotCensus(idle=idle, singleton=singleton, collided=collided)


def classify_slots(frame: FrameOccupancy) -> SlotCensus:
    """
    统计消去前的空闲/单包/碰撞时隙数

    Args:
        frame: 帧占用结构

    Returns:
        SlotCensus: idle + singleton + collided = m
    """
    counts = [0] * frame.frame_slots
    for _, slots in frame.transmissions:
        for slot in slots:
            counts[slot] += 1
    return _census_from_counts(counts)


def decode_frame(frame: FrameOccupancy, scan_order: str = ASCENDING,
                 trace: Optional[TextIO] = None) -> DecodeOutcome:
    """
    迭代剥离译码

    一轮是一次按时隙序号的扫描，而不是对轮初单包时隙的快照：扫描中实时检查占用数，
    遇到单包时隙即译码并消去；消去后在扫描位置之后新出现的单包时隙本轮继续处理，
    位置之前的留到下一轮。因此 rounds 计的是扫描次数，与译出集合无关。
    同一用户同时出现在多个单包时隙时，记录扫描顺序中第一个时隙。

    Args:
        frame: 帧占用结构
        scan_order: 'ascending' 或 'descending'（译出集合与扫描顺序无关）
        trace: 可选文本输出，每个译码事件一行 `round,user,slot`（时隙为1起始编号）

    Returns:
        DecodeOutcome: 译出用户、译码顺序及残余碰撞时隙数
    """
    if scan_order not in (ASCENDING, DESCENDING):
        raise ValueError(f"不支持的扫描顺序: {scan_order}")
    sign = 1 if scan_order == ASCENDING else -1

    replicas = dict(frame.transmissions)
    occupants = frame.slot_occupants()

    if trace is not None:
        trace.write("round,user,slot\n")

    decoded: Set[int] = set()
    order = []
    current = [sign * slot for slot, users in enumerate(occupants) if len(users) == 1]
    heapq.heapify(current)
    round_no = 0

    while current:
        round_no += 1
        next_round = []
        while current:
            key = heapq.heappop(current)
            slot = sign * key
            if len(occupants[slot]) != 1:
                continue
            user = next(iter(occupants[slot]))
            decoded.add(user)
            order.append((user, slot))
            if trace is not None:
                trace.write(f"{round_no},{user},{slot + 1}\n")
            for other in replicas[user]:
                occupants[other].discard(user)
                if len(occupants[other]) == 1:
                    other_key = sign * other
                    if other_key > key:
                        heapq.heappush(current, other_key)
                    else:
                        next_round.append(other_key)
        heapq.heapify(next_round)
        current = next_round

    residual = _census_from_counts(len(users) for users in occupants)
    return DecodeOutcome(
        decoded_users=frozenset(decoded),
        decode_order=tuple(order),
        residual_collided_slots=residual.collided,
        residual_census=residual,
        rounds=round_no,
    )


def peel_fixpoint_bruteforce(frame: FrameOccupancy) -> FrozenSet[int]:
    """
    剥离不动点的穷举参考实现（仅用于小规模帧的校验）

    反复寻找“存在某个时隙只含自己”的剩余用户，直到不再变化。
    """
    remaining = dict(frame.transmissions)
    decoded: Set[int] = set()
    changed = True
    while changed:
        changed = False
        for user, slots in list(remaining.items()):
            others = set()
            for other, other_slots in remaining.items():
                if other != user:
                    others |= other_slots
            if slots - others:
                decoded.add(user)
                del remaining[user]
                changed = True
    return frozenset(decoded)
