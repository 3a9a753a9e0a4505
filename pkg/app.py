"""Flask API server for the X-state discord toolkit."""
import sys

from flask import Flask, request, jsonify
from flask_cors import CORS

from xdiscord import __version__
from xdiscord.channels import Target, apply_phase_flip, detect_events, sweep_dynamics
from xdiscord.config import config
from xdiscord.correlations import correlation_report, is_separable
from xdiscord.errors import XDiscordError
from xdiscord.level_surface import region_predicates
from xdiscord.logger import log_error, setup_logger
from xdiscord.measurement_oracle import discord_oracle
from xdiscord.serialization import to_plain
from xdiscord.state_core import XStateParams, validate_physical

# Setup logging
logger = setup_logger("xdiscord", config.log_level)

# Initialize Flask app
app = Flask(__name__)
app.json.sort_keys = False
CORS(app)


def _payload() -> dict:
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise XDiscordError("request body must be a JSON object")
    return data


def _correlations(data: dict):
    c = data.get("c")
    if not isinstance(c, (list, tuple)) or len(c) != 3:
        raise XDiscordError("'c' must be a list [c1, c2, c3]")
    return tuple(float(v) for v in c)


def _params(data: dict) -> XStateParams:
    return XStateParams(float(data.get("r", 0.0)), float(data.get("s", 0.0)), *_correlations(data))


def _int_option(data: dict, name: str, default: int, upper: int = None) -> int:
    value = int(data.get(name, default))
    if upper is not None and value > upper:
        raise XDiscordError(f"'{name}' must be <= {upper}")
    return value


@app.route('/api/health', methods=['GET'])
def health_check():
    """Health check endpoint."""
    return jsonify({
        "status": "healthy",
        "version": __version__,
    })


@app.route('/api/compute', methods=['POST'])
def compute():
    """Correlation report for one state, optionally after a phase flip."""
    try:
        data = _payload()
        params = _params(data)
        if data.get("p") is not None:
            params = apply_phase_flip(params, float(data["p"]), Target(data.get("targets", "both")))

        logger.info(f"🧮 Compute request - params: {params.as_tuple()}")
        report = correlation_report(params)
        return jsonify({"params": to_plain(params), **to_plain(report)})

    except (XDiscordError, ValueError, TypeError) as e:
        return jsonify({"error": str(e)}), 400
    except Exception as e:
        log_error("Error in compute", exc_info=True, error=e)
        return jsonify({"error": str(e)}), 500


@app.route('/api/oracle', methods=['POST'])
def oracle():
    """Brute-force measurement optimization."""
    try:
        data = _payload()
        params = _params(data)
        grid_n = _int_option(data, "grid_n", config.oracle_grid_n, upper=config.api_max_grid_n)
        refine_depth = _int_option(data, "refine_depth", config.oracle_refine_depth, upper=16)

        logger.info(f"🔍 Oracle request - grid_n: {grid_n}, refine_depth: {refine_depth}")
        result = discord_oracle(params, grid_n, refine_depth)
        return jsonify({"params": to_plain(params), **to_plain(result)})

    except (XDiscordError, ValueError, TypeError) as e:
        return jsonify({"error": str(e)}), 400
    except Exception as e:
        log_error("Error in oracle", exc_info=True, error=e)
        return jsonify({"error": str(e)}), 500


@app.route('/api/dynamics', methods=['POST'])
def dynamics():
    """Phase-flip sweep with critical-point detection."""
    try:
        data = _payload()
        params = _params(data)
        targets = Target(data.get("targets", "both"))
        samples = _int_option(data, "samples", config.sweep_samples, upper=config.sweep_samples * 10)

        logger.info(f"⏳ Dynamics request - samples: {samples}, targets: {targets.value}")
        trajectory = sweep_dynamics(params, samples, targets)
        events = detect_events(params, targets, n_samples=samples)
        return jsonify({
            "params": to_plain(params),
            "events": to_plain(events),
            "trajectory": [sample._asdict() for sample in trajectory.samples],
        })

    except (XDiscordError, ValueError, TypeError) as e:
        return jsonify({"error": str(e)}), 400
    except Exception as e:
        log_error("Error in dynamics", exc_info=True, error=e)
        return jsonify({"error": str(e)}), 500


@app.route('/api/geometry', methods=['POST'])
def geometry():
    """Tetrahedron / octahedron membership of a Bell-diagonal state."""
    try:
        c1, c2, c3 = _correlations(_payload())
        membership = region_predicates(c1, c2, c3)
        separable = None
        if membership.in_tetrahedron:
            state = XStateParams.bell_diagonal(c1, c2, c3)
            if validate_physical(state):
                separable = is_separable(state)
        return jsonify({"c": [c1, c2, c3], **membership._asdict(), "separable": separable})

    except (XDiscordError, ValueError, TypeError) as e:
        return jsonify({"error": str(e)}), 400
    except Exception as e:
        log_error("Error in geometry", exc_info=True, error=e)
        return jsonify({"error": str(e)}), 500


if __name__ == '__main__':
    print("=" * 60)
    print("🚀 Starting X-state discord API server")
    print("=" * 60)

    try:
        config.validate()

        print(f"\n✅ Server running on http://localhost:{config.api_port}")
        print(f"📚 Health: http://localhost:{config.api_port}/api/health")
        print(f"💡 Press Ctrl+C to stop\n")
        print("=" * 60)

        app.run(
            host=config.api_host,
            port=config.api_port,
            debug=False
        )

    except Exception as e:
        logger.error(f"Failed to start server: {e}", exc_info=True)
        sys.exit(1)
