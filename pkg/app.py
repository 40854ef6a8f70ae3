from flask import Flask, request, jsonify
from flask_cors import CORS
from datetime import datetime
import logging
import os

from config import Config
from modules.builtin_categories import BUILTIN_NAMES, get_builtin
from modules.category_core import CategoryValidator, category_from_json
from modules.dimer_state import ace, aee, mutual_information, new_dimer
from modules.errors import DataIncompleteError, InvalidInputError, UnsupportedInputError
from modules.partial_transpose import partial_transpose
from modules.zero_locus import ParameterSweeper

DOMAIN_ERRORS = (InvalidInputError, DataIncompleteError, UnsupportedInputError)

# 创建Flask应用
app = Flask(__name__)
app.config.from_object(Config)

# 启用CORS
CORS(app)

# 初始化各个模块
config = Config()
validator = CategoryValidator(config)
sweeper = ParameterSweeper(config)


def _optional_int(value):
    if value is None or value == '':
        return None
    try:
        return int(value)
    except (TypeError, ValueError):
        raise InvalidInputError(f"'{value}' is not an integer")


def resolve_category(selector: dict):
    """{builtin, nu, k} 或 {json: {...}}"""
    if not isinstance(selector, dict):
        raise InvalidInputError("category must be an object")
    if 'json' in selector:
        return category_from_json(selector['json'])
    return get_builtin(selector.get('builtin'), nu=_optional_int(selector.get('nu')),
                       k=_optional_int(selector.get('k')), config=config)


@app.route('/')
def index():
    """服务状态"""
    return jsonify({
        'service': 'anyon-negativity',
        'status': 'normal',
        'time': datetime.now().strftime('%Y-%m-%d %H:%M:%S'),
    })


@app.route('/api/categories')
def api_categories():
    """内置范畴列表"""
    params = {'ising': ['nu'], 'fibonacci': [], 'su2': ['k'], 'su3_3': []}
    return jsonify([{'builtin': name, 'params': params[name]} for name in BUILTIN_NAMES])


@app.route('/api/validate')
def api_validate():
    """范畴一致性检查API"""
    try:
        cat = resolve_category(request.args.to_dict())
        reports = validator.run_all(cat, _optional_int(request.args.get('sample_limit')))
        return jsonify({
            'category': cat.name,
            'passed': all(r.passed for r in reports),
            'reports': [r.to_dict() for r in reports],
        })
    except DOMAIN_ERRORS as e:
        logging.error(f"Error in validate API: {e}")
        return jsonify({'error': str(e)}), 400


@app.route('/api/aln', methods=['POST'])
def api_aln():
    """dimer 的部分转置与 ALN"""
    try:
        data = request.get_json(silent=True) or {}
        cat = resolve_category(data.get('category', {}))
        state = new_dimer(cat, data.get('a'), data.get('b'), data.get('p', {}), config)
        payload = partial_transpose(state, data.get('side', 'A')).to_dict(config)
        payload['aee'] = aee(state, config)
        payload['mutual_information'] = mutual_information(state, config)
        payload['ace'] = ace(state) if state.is_multiplicity_free() else None
        return jsonify(payload)
    except DOMAIN_ERRORS as e:
        logging.error(f"Error in aln API: {e}")
        return jsonify({'error': str(e)}), 400


@app.route('/api/sweep', methods=['POST'])
def api_sweep():
    """通道概率网格上的 ALN"""
    try:
        data = request.get_json(silent=True) or {}
        cat = resolve_category(data.get('category', {}))
        resolution = _optional_int(data.get('resolution')) or 20
        grid = sweeper.sweep(cat, data.get('a'), data.get('b'), resolution,
                             werner=bool(data.get('werner', False)))
        return jsonify(grid.to_dict())
    except DOMAIN_ERRORS as e:
        logging.error(f"Error in sweep API: {e}")
        return jsonify({'error': str(e)}), 400


# 错误处理
@app.errorhandler(404)
def not_found(error):
    return jsonify({'error': '页面未找到'}), 404


@app.errorhandler(500)
def internal_error(error):
    return jsonify({'error': '内部服务器错误'}), 500


if __name__ == '__main__':
    # 配置日志
    logging.basicConfig(
        level=getattr(logging, config.LOG_LEVEL.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    # 启动应用
    port = int(os.environ.get('PORT', 8080))
    app.run(
        host='0.0.0.0',
        port=port,
        debug=False
    )
