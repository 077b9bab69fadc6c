"""This module defines the HTTP endpoints for generating, solving and verifying
homology localization instances.
"""
from flask import jsonify, Flask, request
from werkzeug.exceptions import HTTPException

from app.config import Config
from app.controllers.solve_controller import family_catalog, generate_payload, solve_payload, verify_payload
from app.errors import HomologyError, OracleCapExceeded, ResourceLimitExceeded
from app.logger import setup_logger

logger = setup_logger(__name__)

app = Flask(__name__)
app.config.from_object(Config)


def _body():
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise HomologyError("the request body must be a JSON object")
    return data


@app.route('/families')
def get_families():
    """Endpoint to list the instance generator families.
    Returns:
        json: Family names with their parameter usage.
    """
    return jsonify(family_catalog())


@app.route('/instances', methods=['POST'])
def create_instance():
    """Endpoint to generate one instance.
    Body:
        family (str), params (list), seed (int, default 0), mode (str, optional).
    Returns:
        json: The instance file representation and a summary.
    """
    data = _body()
    return jsonify(generate_payload(data.get("family"), data.get("params", []),
                                    data.get("seed", 0), data.get("mode")))


@app.route('/solve', methods=['POST'])
def solve_instance_post():
    """Endpoint to solve an instance.
    Body:
        instance (dict), algo (str, default "both"), time_limit, mem_cap_entries, brute_cap.
    Returns:
        json: One witness with solve statistics per algorithm.
    """
    data = _body()
    return jsonify(solve_payload(data.get("instance"), data.get("algo", "both"), data.get("time_limit"),
                                 data.get("mem_cap_entries"), data.get("brute_cap")))


@app.route('/verify', methods=['POST'])
def verify_witness_post():
    """Endpoint to check a witness against its instance.
    Returns:
        json: {"ok": true, "cost": ...} or {"ok": false, "check": ..., "message": ...}.
    """
    data = _body()
    return jsonify(verify_payload(data.get("instance"), data.get("witness")))


@app.errorhandler(ResourceLimitExceeded)
def resource_limit_exceeded(error):
    """Error handler for solves stopped by a time or memory limit."""
    return jsonify({"error": {"code": 422, "status": error.status, "message": str(error)}}), 422


@app.errorhandler(OracleCapExceeded)
def oracle_cap_exceeded(error):
    return jsonify({"error": {"code": 422, "status": "memory_cap", "message": str(error)}}), 422


@app.errorhandler(HomologyError)
def invalid_input(error):
    """Error handler for invalid complexes, cycles, decompositions and parameters.

    Returns:
        json: Error message.
    """
    return jsonify({"error": {"code": 400, "message": str(error)}}), 400


@app.errorhandler(HTTPException)
def http_error(error):
    return jsonify({"error": {"code": error.code, "message": error.name}}), error.code


@app.errorhandler(500)
def internal_server_error(error):
    """Error handler for internal server errors.

    Returns:
        json: Error message.
    """
    logger.error("unhandled error: %s", getattr(error, "original_exception", error))
    return jsonify({"error": {"code": 500, "message": "Internal Server Error"}}), 500


if __name__ == '__main__':
    app.run(debug=True)
