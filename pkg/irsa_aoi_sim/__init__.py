"""
IRSA 信息年龄仿真分析软件
Age-of-Information simulator for frame-based random access
(slotted ALOHA, IRSA, age-threshold IRSA)

版本: 1.0
作者: 随机接入仿真团队
"""

__version__ = '1.0.0'
__author__ = 'Random Access Simulation Team'
