"""
日志配置模块
"""
import logging

LOGGER_NAME = 'IrsaAoiSim'

# 全局logger实例
logger = logging.getLogger(LOGGER_NAME)


def setup_logging(log_file=None, level=logging.INFO):
    """
    配置日志系统

    Args:
        log_file: 日志文件路径（None 表示只输出到控制台）
        level: 控制台日志级别

    Returns:
        logging.Logger: 配置好的logger实例
    """
    logger.setLevel(logging.DEBUG)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    # 避免重复添加handler
    if not any(isinstance(h, logging.StreamHandler) and not isinstance(h, logging.FileHandler)
               for h in logger.handlers):
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    for handler in logger.handlers:
        if not isinstance(handler, logging.FileHandler):
            handler.setLevel(level)

    if log_file and not any(isinstance(h, logging.FileHandler) for h in logger.handlers):
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger
