# -*- coding: utf-8 -*-
"""
测试脚本共用的运行器
"""

import logging
import traceback

# 配置日志
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s',
)


def run_suite(title, tests):
    """依次运行 (名称, 函数) 列表，返回是否全部通过"""
    logging.info(f"🚀 开始{title}")
    logging.info("=" * 60)

    passed = 0
    failed = 0
    for test_name, test_func in tests:
        try:
            test_func()
            logging.info(f"✅ {test_name} 测试通过")
            passed += 1
        except Exception as e:
            logging.error(f"❌ {test_name} 测试失败: {e}")
            logging.debug(traceback.format_exc())
            failed += 1

    logging.info("=" * 60)
    logging.info(f"📊 通过: {passed}  失败: {failed}")
    return failed == 0
