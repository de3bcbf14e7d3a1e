from flask import Flask
import pytest

from reviewcues.run import create_app
from reviewcues.tests.common.help_functions import planted_corpus


@pytest.fixture
def app(request: pytest.FixtureRequest):
    """Create the Flask app configured by the test class attributes"""
    app = create_app(request.cls)
    request.cls.app = app

    yield app


@pytest.fixture
def client(app: Flask, request: pytest.FixtureRequest):
    client = app.test_client()
    request.cls.client = client

    yield client


@pytest.fixture(scope="session")
def planted():
    """The two-project planted corpus, generated once per session"""
    return planted_corpus()
