"""
错误类型
所有错误均继承自 ValueError
"""


class InvalidInputError(ValueError):
    """输入格式或取值范围错误"""


class DataIncompleteError(ValueError):
    """范畴数据缺少所需的 F/R 块"""

    def __init__(self, block: str):
        self.block = block
        super().__init__(f"Missing symbol data: {block}")


class UnsupportedInputError(ValueError):
    """输入超出该操作的适用范围"""
