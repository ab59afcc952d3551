"""REST endpoints: building, dragging, checking, rendering, deleting."""

import json

import pytest
from fastapi.testclient import TestClient

from cyclekit.api_service import create_app
from cyclekit.figure import deserialize


@pytest.fixture()
def client():
    return TestClient(create_app())


def build_chain(client):
    client.post("/figure/nodes",
                json={"label": "a", "cycle": {"k": 1, "l": [0, 0], "m": -1}})
    client.post("/figure/nodes", json={"label": "C", "point": [0, 0]})
    client.post("/figure/nodes", json={"label": "l", "relations": [
        {"kind": "tangent", "target": "a"},
        {"kind": "passes_infinity"},
        {"kind": "only_reals"}]})
    client.post("/figure/nodes", json={"label": "P", "relations": [
        {"kind": "self_orthogonal"},
        {"kind": "orthogonal", "target": "a"},
        {"kind": "orthogonal", "target": "l"},
        {"kind": "only_reals"}]})
    client.post("/figure/nodes", json={"label": "r", "relations": [
        {"kind": "orthogonal", "target": "P"},
        {"kind": "orthogonal", "target": "C"},
        {"kind": "passes_infinity"}]})


class TestGetFigure:
    def test_empty_session(self, client):
        doc = client.get("/figure").json()
        assert doc["revision"] == 0
        assert [n["key"] for n in doc["nodes"]] == ["infty", "R"]

    def test_body_round_trips_through_deserializer(self, client):
        build_chain(client)
        doc = client.get("/figure").json()
        assert len(doc["nodes"]) == 7
        fig = deserialize(json.dumps(doc))
        assert len(fig.nodes) == 7

    def test_repeated_reads_identical(self, client):
        build_chain(client)
        assert client.get("/figure").text == client.get("/figure").text


class TestPostNodes:
    def test_explicit_cycle(self, client):
        r = client.post("/figure/nodes", json={
            "label": "a", "cycle": {"k": 1, "l": [0, 0], "m": -1}})
        assert r.status_code == 200
        body = r.json()
        assert body["generation"] == 0
        assert body["revision"] == 1
        assert body["instances"] == [{"k": "1", "l": ["0", "0"], "m": "-1"}]

    def test_relation_node_reports_params(self, client):
        build_chain(client)
        doc = client.get("/figure").json()
        l_node = next(n for n in doc["nodes"] if n["label"] == "l")
        assert l_node["free_params"] == ["u_l"]

    def test_duplicate_label(self, client):
        build_chain(client)
        r = client.post("/figure/nodes", json={"label": "a",
                                               "point": [1, 1]})
        assert r.status_code == 409
        assert r.json()["code"] == "DuplicateLabel"

    def test_unknown_target(self, client):
        r = client.post("/figure/nodes", json={
            "label": "x", "relations": [{"kind": "orthogonal",
                                         "target": "ghost"}]})
        assert r.status_code == 422
        assert r.json()["code"] == "UnknownTarget"

    def test_unsatisfiable(self, client):
        build_chain(client)
        r = client.post("/figure/nodes", json={"label": "bad", "relations": [
            {"kind": "steiner_power", "target": "a", "value": 3},
            {"kind": "passes_infinity"}]})
        assert r.status_code == 422
        assert r.json()["code"] == "UnsatisfiableRelations"

    def test_parse_error(self, client):
        r = client.post("/figure/nodes", json={
            "label": "x", "cycle": {"k": "1 +", "l": [0, 0], "m": 0}})
        assert r.status_code == 400
        assert r.json()["code"] == "ParseError"

    def test_body_shape_validation(self, client):
        assert client.post("/figure/nodes",
                           json={"label": "x"}).status_code == 400
        assert client.post("/figure/nodes", json={
            "label": "x", "point": [0, 0],
            "cycle": {"k": 1, "l": [0, 0], "m": 0}}).status_code == 400
        assert client.post("/figure/nodes",
                           json={"point": [0, 0]}).status_code == 400
        r = client.post("/figure/nodes", json={"label": "x",
                                               "relations": []})
        assert r.status_code == 422
        assert r.json()["code"] == "NoRelations"

    def test_optimistic_concurrency(self, client):
        r = client.post("/figure/nodes", json={
            "label": "p", "point": [0, 0], "expected_revision": 5})
        assert r.status_code == 409
        assert r.json()["details"]["current_revision"] == 0


class TestPatch:
    def test_drag_updates_dependents(self, client):
        build_chain(client)
        r = client.patch("/figure/nodes/a.0", json={
            "cycle": {"k": 1, "l": [0, 0], "m": -4}})
        assert r.status_code == 200
        assert set(r.json()["updated_keys"]) == {"a.0", "l.2", "P.3"}
        verdicts = client.post("/figure/check", json={
            "k1": "l", "k2": "a", "kind": "tangent"}).json()["verdicts"]
        assert verdicts == ["True", "True"]

    def test_drag_point(self, client):
        build_chain(client)
        r = client.patch("/figure/nodes/C.1", json={"point": [0.5, 0]})
        assert r.status_code == 200
        assert r.json()["updated_keys"] == ["C.1", "r.4"]

    def test_noop_drag_still_bumps_revision(self, client):
        build_chain(client)
        before = client.get("/figure").json()["revision"]
        r = client.patch("/figure/nodes/C.1", json={"point": [0, 0]})
        assert r.json()["updated_keys"] == []
        assert r.json()["revision"] == before + 1

    def test_error_paths(self, client):
        build_chain(client)
        assert client.patch("/figure/nodes/zz.9",
                            json={"point": [0, 0]}).status_code == 404
        r = client.patch("/figure/nodes/l.2", json={"point": [0, 0]})
        assert r.status_code == 409 and r.json()["code"] == "NotARoot"
        r = client.patch("/figure/nodes/R", json={"point": [0, 0]})
        assert r.status_code == 409 and r.json()["code"] == "ReservedNode"
        assert client.patch("/figure/nodes/C.1",
                            json={}).status_code == 400

    def test_stale_revision(self, client):
        build_chain(client)
        r = client.patch("/figure/nodes/C.1", json={
            "point": [1, 0], "expected_revision": 1})
        assert r.status_code == 409
        assert r.json()["details"]["current_revision"] == 5


class TestCheck:
    def test_chain_verdicts(self, client):
        build_chain(client)
        r = client.post("/figure/check", json={
            "k1": "l", "k2": "r", "kind": "orthogonal"})
        assert r.json()["verdicts"] == ["True", "True"]

    def test_false_verdict(self, client):
        build_chain(client)
        r = client.post("/figure/check", json={
            "k1": "a", "k2": "infty", "kind": "orthogonal"})
        assert r.json()["verdicts"] == ["False"]

    def test_bad_kind_and_key(self, client):
        build_chain(client)
        r = client.post("/figure/check", json={
            "k1": "a", "k2": "a", "kind": "parallel"})
        assert r.status_code == 400
        assert client.post("/figure/check", json={
            "k1": "zz", "k2": "a", "kind": "tangent"}).status_code == 404


class TestRender:
    def test_svg_with_params(self, client):
        build_chain(client)
        r = client.get("/figure/render.svg", params={"u_l": "1/2"})
        assert r.status_code == 200
        assert r.headers["content-type"].startswith("image/svg+xml")
        assert "node-l.2-inst-0" in r.text

    def test_missing_param_names_it(self, client):
        build_chain(client)
        r = client.get("/figure/render.svg")
        assert r.status_code == 422
        assert r.json()["details"]["names"] == ["u_l"]

    def test_empty_figure(self, client):
        r = client.get("/figure/render.svg")
        assert r.status_code == 200
        assert r.text.startswith("<svg")

    def test_viewport_query(self, client):
        r = client.get("/figure/render.svg", params={
            "xmin": "-2", "xmax": "2", "ymin": "-2", "ymax": "2",
            "width": "200", "height": "200", "samples": "16"})
        assert 'width="200"' in r.text
        assert client.get("/figure/render.svg",
                          params={"width": "x"}).status_code == 400

    def test_bad_param_value(self, client):
        build_chain(client)
        r = client.get("/figure/render.svg", params={"u_l": "abc"})
        assert r.status_code == 400


class TestDelete:
    def test_leaf_delete(self, client):
        build_chain(client)
        r = client.delete("/figure/nodes/r.4")
        assert r.json()["removed_keys"] == ["r.4"]

    def test_dependents_block_delete(self, client):
        build_chain(client)
        r = client.delete("/figure/nodes/a.0")
        assert r.status_code == 409
        assert r.json()["code"] == "HasDependents"

    def test_cascade(self, client):
        build_chain(client)
        r = client.delete("/figure/nodes/l.2", params={"cascade": "true"})
        assert set(r.json()["removed_keys"]) == {"l.2", "P.3", "r.4"}
        assert len(client.get("/figure").json()["nodes"]) == 4

    def test_reserved_and_unknown(self, client):
        assert client.delete("/figure/nodes/R").status_code == 409
        assert client.delete("/figure/nodes/zz.1").status_code == 404


class TestRevisions:
    def test_strictly_increasing(self, client):
        seen = [client.get("/figure").json()["revision"]]
        client.post("/figure/nodes", json={"label": "p", "point": [1, 0]})
        seen.append(client.get("/figure").json()["revision"])
        client.patch("/figure/nodes/p.0", json={"point": [2, 0]})
        seen.append(client.get("/figure").json()["revision"])
        client.delete("/figure/nodes/p.0")
        seen.append(client.get("/figure").json()["revision"])
        assert seen == sorted(set(seen))
        assert seen[-1] == 3
