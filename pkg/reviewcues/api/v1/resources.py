from flask import Blueprint
from flask_cors import CORS
from flask_restful import Api

from reviewcues.api.common import HealthcheckHandler, LexiconHandler, LintHandler

api = Blueprint("api", __name__, url_prefix="/api")
CORS(api)
restful_api = Api(api)

restful_api.add_resource(HealthcheckHandler, "/healthcheck")
restful_api.add_resource(LexiconHandler, "/lexicon")
restful_api.add_resource(LintHandler, "/lint")
