import json

import httpx
import pytest

from cages.errors import FetchError
from cages.fixtures import petersen_graph
from catalog.fetch import INDEX_FILE, ReferenceGraphClient, extract_graph6

URL = "https://graphs.example/api/graphs/{id}"


def _client(tmp_path, handler) -> ReferenceGraphClient:
    return ReferenceGraphClient(URL, tmp_path / "cache", transport=httpx.MockTransport(handler))


class TestExtract:
    def test_json_field(self):
        assert extract_graph6(json.dumps({"graph6": "IheA@GUAo"})) == "IheA@GUAo"

    def test_nested_json(self):
        body = json.dumps({"data": [{"name": "Petersen", "canonicalForm": "IheA@GUAo"}]})
        assert extract_graph6(body) == "IheA@GUAo"

    def test_plain_text_with_header(self):
        assert extract_graph6(">>graph6<<IheA@GUAo\n") == "IheA@GUAo"

    def test_json_without_graph6(self):
        with pytest.raises(FetchError):
            extract_graph6(json.dumps({"name": "Petersen"}))

    def test_empty_body(self):
        with pytest.raises(FetchError):
            extract_graph6("\n\n")


class TestClient:
    def test_fetch_and_cache(self, tmp_path):
        calls = []

        def handler(request: httpx.Request) -> httpx.Response:
            calls.append(str(request.url))
            return httpx.Response(200, json={"graph6": "IheA@GUAo"})

        client = _client(tmp_path, handler)
        assert client.fetch(660) == petersen_graph()
        assert calls == ["https://graphs.example/api/graphs/660"]

        assert client.fetch(660) == petersen_graph()
        assert len(calls) == 1
        index = json.loads((tmp_path / "cache" / INDEX_FILE).read_text(encoding="utf-8"))
        assert set(index) == {"660"}
        assert (tmp_path / "cache" / f"{index['660']}.g6").exists()

        client.fetch(660, refresh=True)
        assert len(calls) == 2

    def test_http_error(self, tmp_path):
        client = _client(tmp_path, lambda request: httpx.Response(404, text="not found"))
        with pytest.raises(FetchError):
            client.fetch(1)
        assert client.cached(1) is None

    def test_bad_graph6(self, tmp_path):
        client = _client(tmp_path, lambda request: httpx.Response(200, text="not graph6 at all"))
        with pytest.raises(FetchError):
            client.fetch(2)

    def test_invalid_id(self, tmp_path):
        client = _client(tmp_path, lambda request: httpx.Response(200, text="IheA@GUAo"))
        with pytest.raises(FetchError):
            client.fetch(0)


@pytest.mark.network
def test_live_petersen(tmp_path):
    client = ReferenceGraphClient("https://houseofgraphs.org/api/graphs/{id}", tmp_path)
    graph = client.fetch(660)
    assert graph.n == 10
    assert set(graph.degrees()) == {3}
