"""测试公共夹具"""
import numpy as np
import pytest

from irsa_aoi_sim.config.logging_config import logger
from irsa_aoi_sim.models.access_data import FrameOccupancy, validate_distribution


@pytest.fixture(autouse=True)
def release_log_handlers():
    """main() 挂到 logger 上的处理器绑定了 capsys 的临时流，用例结束后全部关闭并移除"""
    yield
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()


@pytest.fixture
def x3():
    """正则分布 Λ(x) = x³"""
    return validate_distribution([(3, 1.0)])


@pytest.fixture
def x1():
    return validate_distribution([(1, 1.0)])


@pytest.fixture
def fig1_frame():
    """4 个用户、5 个时隙的示例帧（1起始编号）"""
    return FrameOccupancy.from_one_based(5, {
        1: [1, 4, 5],
        2: [1, 2, 5],
        3: [2, 3, 4],
        4: [2, 5],
    })


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
