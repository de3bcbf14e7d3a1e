from flask import current_app, request
from flask_restful import Resource

from reviewcues.linter import LintSettings, lint
from reviewcues.preprocessing import Comment
from reviewcues.utils import get_lexicon


class HealthcheckHandler(Resource):
    def get(self):
        return "OK"


class LexiconHandler(Resource):
    def get(self):
        return get_lexicon()


class LintHandler(Resource):
    """Lint one comment, sent as JSON or form data with a ``message`` field
    and optional ``id`` and ``project``."""

    def post(self):
        payload = request.get_json(silent=True)
        if payload is None:
            payload = request.form
        if not hasattr(payload, "get"):
            return {"message": ["Expected a JSON object."]}, 400

        errors = {}
        message = payload.get("message")
        if not isinstance(message, str):
            errors["message"] = ["This field is required."]
        for name in ("id", "project"):
            if payload.get(name) is not None and not isinstance(payload[name], str):
                errors[name] = ["Must be a string."]
        if errors:
            return errors, 400

        comment = Comment(
            id=payload.get("id") or "comment",
            project=payload.get("project") or "unknown",
            message=message,
        )
        settings = LintSettings.from_mapping(current_app.config)
        return lint(comment, get_lexicon(), settings)
