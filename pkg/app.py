from flask import Flask, Response, jsonify, request
from werkzeug.exceptions import HTTPException
import os

from cli import FORMATS, RunConfig, render, run
from config import Config
from errors import GTRiskError, ValidationError

app = Flask(__name__)
app.config.from_object(Config)
# Deployments can cap the worker threads the same way the CLI does
if os.environ.get('VERCEL'):
    os.environ.setdefault('GT_RISK_THREADS', '1')


def _number(name, cast=float, default=None):
    raw = request.args.get(name)
    if raw is None or raw == '':
        return default
    try:
        return cast(raw)
    except ValueError:
        raise ValidationError(f"query parameter {name!r} is not a valid {cast.__name__}: {raw!r}")


def _respond(config):
    """Run a RunConfig and answer in the requested format (json by default)"""
    report = run(config)
    if config.format == 'csv':
        return Response(render(report, 'csv'), mimetype='text/csv')
    return Response(render(report, 'json'), mimetype='application/json')


def _format(default='json'):
    fmt = request.args.get('format', default)
    if fmt not in FORMATS:
        raise ValidationError(f"format must be one of {', '.join(FORMATS)}")
    return fmt


# API Routes
@app.route('/')
def index():
    return jsonify({
        'endpoints': [
            '/api/mse', '/api/worst-case', '/api/phase-curve',
            '/api/simulate', '/api/landscape', '/api/lemmas/<name>',
        ],
    })


@app.route('/api/mse')
def api_mse():
    return _respond(RunConfig(
        subcommand='mse',
        dist_spec=request.args.get('dist'),
        n=_number('n', int),
        oracle=request.args.get('oracle') in ('1', 'true'),
        occupancy=request.args.get('occupancy') in ('1', 'true'),
        format=_format(),
    ))


@app.route('/api/worst-case')
def api_worst_case():
    return _respond(RunConfig(
        subcommand='worst-case',
        n=_number('n', int),
        m=request.args.get('m', 'inf'),
        format=_format(),
    ))


@app.route('/api/phase-curve')
def api_phase_curve():
    return _respond(RunConfig(
        subcommand='phase-curve',
        start=_number('start'),
        stop=_number('stop'),
        step=_number('step'),
        ratios=request.args.get('ratios'),
        n_ref=_number('n_ref', int, Config.DEFAULT_N_REF),
        format=_format('csv'),
    ))


@app.route('/api/simulate')
def api_simulate():
    return _respond(RunConfig(
        subcommand='simulate',
        dist_spec=request.args.get('dist'),
        n=_number('n', int),
        trials=_number('trials', int),
        seed=_number('seed', int, 0),
        format=_format(),
    ))


@app.route('/api/landscape')
def api_landscape():
    return _respond(RunConfig(
        subcommand='landscape',
        ratio=_number('ratio', default=0.8),
        c_max=_number('c_max', default=5.0),
        points=_number('points', int),
        format=_format('csv'),
    ))


@app.route('/api/lemmas/<name>')
def api_lemmas(name):
    return _respond(RunConfig(
        subcommand='lemmas',
        lemma=name,
        a=_number('a'),
        b=_number('b'),
        x=_number('x'),
        u_max=_number('u_max', default=7.0),
        points=_number('points', int),
        format=_format('csv' if name == 'exp-quad-curve' else 'json'),
    ))


# Error handlers
@app.errorhandler(ValidationError)
def handle_validation_error(e):
    return jsonify({'error': str(e)}), 400


@app.errorhandler(GTRiskError)
def handle_computation_error(e):
    app.logger.error(f"Computation failed on {request.path}: {e}")
    return jsonify({'error': str(e)}), 422


@app.errorhandler(HTTPException)
def handle_http_error(e):
    return jsonify({'error': e.description}), e.code


if __name__ == '__main__':
    app.run(debug=True, port=5001)
