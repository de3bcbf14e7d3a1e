import json

import pytest

from reviewcues.corpus import write_corpus
from reviewcues.preprocessing import Comment


@pytest.mark.usefixtures("client")
class BaseTestCase:
    TESTING = True

    def write_corpus(self, path, rows):
        """Write (id, project, message) rows, or Comments, as a JSONL corpus."""
        comments = [
            row if isinstance(row, Comment) else Comment(*row) for row in rows
        ]
        write_corpus(comments, path)
        return path

    def write_lines(self, path, lines):
        path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        return path

    def invoke(self, command, *args, **kwargs):
        runner = self.app.test_cli_runner()
        return runner.invoke(command, [str(arg) for arg in args], **kwargs)


class ReviewCuesTestCase(BaseTestCase):
    def assertStatus(self, expected, resp, url=None):
        if url is None:
            url = resp.request.path
        assert (
            expected == resp.status_code
        ), f"{url} expected {expected}, got {resp.status_code}"

    def post_lint(self, message, **fields):
        fields["message"] = message
        return self.client.post("/api/lint", json=fields)

    def lint_report(self, message, **fields):
        resp = self.post_lint(message, **fields)
        self.assertStatus(200, resp)
        return json.loads(resp.data.decode("utf-8"))
