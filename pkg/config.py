import os
from dotenv import load_dotenv

load_dotenv()

class Config:
    LOG_LEVEL = os.environ.get('LOG_LEVEL') or 'INFO'

    # 并行配置
    ANYON_NEG_THREADS = int(os.environ.get('ANYON_NEG_THREADS') or 1)

    # 数值容差
    HERMITIAN_TOL = float(os.environ.get('HERMITIAN_TOL') or 1e-12)
    RANK_TOL = float(os.environ.get('RANK_TOL') or 1e-9)
    EIGEN_CUTOFF = float(os.environ.get('EIGEN_CUTOFF') or 1e-14)
    PSD_TOL = float(os.environ.get('PSD_TOL') or 1e-10)
    NORMALIZATION_REPAIR_TOL = float(os.environ.get('NORMALIZATION_REPAIR_TOL') or 1e-6)
    CONSISTENCY_TOL = float(os.environ.get('CONSISTENCY_TOL') or 1e-8)
    ZERO_TOL = float(os.environ.get('ZERO_TOL') or 1e-8)
    ALN_CLAMP_TOL = float(os.environ.get('ALN_CLAMP_TOL') or 1e-10)
    FERMION_TRACE_TOL = float(os.environ.get('FERMION_TRACE_TOL') or 1e-10)

    # 规模上限
    SU2_MAX_LEVEL = int(os.environ.get('SU2_MAX_LEVEL') or 200)
    FOCK_MAX_MODES = int(os.environ.get('FOCK_MAX_MODES') or 6)

    # 一致性检查抽样
    VERIFY_SAMPLE_LIMIT = int(os.environ.get('VERIFY_SAMPLE_LIMIT') or 4000)
    VERIFY_SEED = int(os.environ.get('VERIFY_SEED') or 20190)
    # 抽样模式下每项检查最多按需生成的块数
    VERIFY_BLOCK_BUDGET = int(os.environ.get('VERIFY_BLOCK_BUDGET') or 1500)

    # 输出格式
    CSV_SIGNIFICANT_DIGITS = int(os.environ.get('CSV_SIGNIFICANT_DIGITS') or 12)

    @property
    def FLOAT_FORMAT(self):
        return f"%.{self.CSV_SIGNIFICANT_DIGITS}g"
