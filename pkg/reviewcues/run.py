import os
import os.path
import warnings

from flask import Flask
from werkzeug.middleware.proxy_fix import ProxyFix

from reviewcues.api.v1 import api as apiv1
from reviewcues.linter import LintSettings
from reviewcues.pipeline import RunConfig
from reviewcues.utils import ReviewCuesJSONEncoder


def load_configuration(app, configuration=None):
    """Find the right configuration file for the application and load it.

    By order of preference:
    - Use the REVIEWCUES_SETTINGS_FILE_PATH env var if defined ;
    - If not, use /etc/reviewcues/reviewcues.cfg ;
    - Otherwise, load the default settings.
    """

    env_var_config = os.environ.get("REVIEWCUES_SETTINGS_FILE_PATH")
    app.config.from_object("reviewcues.default_settings")
    if configuration:
        app.config.from_object(configuration)
    elif env_var_config:
        app.config.from_pyfile(env_var_config)
    else:
        app.config.from_pyfile("reviewcues.cfg", silent=True)
    # Configure custom JSONEncoder used by the API
    app.config["RESTFUL_JSON"] = {"cls": ReviewCuesJSONEncoder}


def validate_configuration(app):
    """Raise ValueError on unusable settings and return the RunConfig."""
    run_config = RunConfig.from_mapping(app.config)
    LintSettings.from_mapping(app.config)
    tolerance = app.config["MALFORMED_RECORD_TOLERANCE"]
    if not 0 <= tolerance <= 1:
        raise ValueError("MALFORMED_RECORD_TOLERANCE must be within [0, 1]")
    if app.config["GERRIT_MAX_CONCURRENCY"] < 1:
        raise ValueError("GERRIT_MAX_CONCURRENCY must be >= 1")
    if app.config["GERRIT_MAX_ATTEMPTS"] < 1:
        raise ValueError("GERRIT_MAX_ATTEMPTS must be >= 1")

    if not run_config.matches_reference():
        warnings.warn(
            "The window, frequency filter, top-K list or article exclusions"
            + " differ from the reference study settings: inclusion rates will"
            + " not be comparable to published ones.",
            UserWarning,
        )
    return run_config


def create_app(
    configuration=None, instance_path="/etc/reviewcues", instance_relative_config=True
):
    app = Flask(
        __name__,
        instance_path=instance_path,
        instance_relative_config=instance_relative_config,
    )

    # If a configuration object is passed, use it. Otherwise try to find one.
    load_configuration(app, configuration)

    # Get client's real IP
    app.wsgi_app = ProxyFix(app.wsgi_app)

    validate_configuration(app)
    app.register_blueprint(apiv1)

    return app


def main():
    app = create_app()
    app.run(host="0.0.0.0", debug=True)


if __name__ == "__main__":
    main()
