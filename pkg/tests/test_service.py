"""The HTTP session service: endpoints, error contract, undo stack, LRU."""

import json

import pytest
from fastapi.testclient import TestClient

from rulehide.cli import run
from rulehide.dataset import generate, parse_csv, parse_rules, write_csv
from rulehide.induction import extract_rules, induce, parse_path, tree_from_dict
from rulehide.service import MAX_SESSIONS, ServiceError, SessionStore, create_app

from tests.conftest import BENCHMARK_RULES, BENCHMARK_SEED

# A leaf whose hiding needs additions with free attribute values, so the
# sanitized output depends on the seed.
SEEDED_LEAF = "a1=t/a5=t/a3=f/a2=t/a4=f"
# A leaf whose hiding is pure relabeling (no additions).
FREE_LEAF = "a1=t/a5=t/a3=t"

PURE_PAIR_CSV = "a1,class\n" + "t,p\n" * 5 + "f,n\n" * 5


@pytest.fixture(scope="session")
def benchmark_csv():
    rules = parse_rules(BENCHMARK_RULES.read_text())
    return write_csv(generate(rules, 1000, BENCHMARK_SEED))


@pytest.fixture()
def client():
    return TestClient(create_app())


@pytest.fixture()
def session_id(client, benchmark_csv):
    response = client.post("/sessions", json={"csv": benchmark_csv})
    assert response.status_code == 200
    return response.json()["id"]


def test_create_session_returns_distinct_ids(client, benchmark_csv):
    first = client.post("/sessions", json={"csv": benchmark_csv}).json()["id"]
    second = client.post("/sessions", json={"csv": benchmark_csv}).json()["id"]
    assert first != second


def test_create_session_empty_body_is_parse_error(client):
    response = client.post("/sessions", json={"csv": ""})
    assert response.status_code == 400
    body = response.json()
    assert body["code"] == "parse-error"
    assert body["message"]


def test_create_session_bad_cell_names_location(client):
    response = client.post("/sessions", json={"csv": "a1,class\nq,p\n"})
    assert response.status_code == 400
    assert "row 1, column 1" in response.json()["message"]


def test_get_tree_stable_and_matches_cli_rules(client, session_id, benchmark_csv, tmp_path, capsys):
    first = client.get(f"/sessions/{session_id}/tree")
    second = client.get(f"/sessions/{session_id}/tree")
    assert first.status_code == 200
    assert first.json() == second.json()

    csv_path = tmp_path / "bench.csv"
    csv_path.write_text(benchmark_csv)
    assert run(["rules", "--data", str(csv_path)]) == 0
    cli_rules = capsys.readouterr().out.strip().splitlines()
    assert [leaf["rule"] for leaf in first.json()["leaves"]] == cli_rules
    assert len(cli_rules) == 11


def test_get_tree_unknown_session_is_404(client):
    response = client.get("/sessions/deadbeef/tree")
    assert response.status_code == 404
    assert response.json()["code"] == "unknown-session"


def test_preview_matches_commit_and_leaves_state_untouched(client, session_id):
    request = {"leaves": [SEEDED_LEAF], "strategy": "hold_back", "seed": 4}
    before = client.get(f"/sessions/{session_id}/tree").json()
    preview = client.post(f"/sessions/{session_id}/preview", json=request)
    assert preview.status_code == 200
    # previewing mutates nothing
    assert client.get(f"/sessions/{session_id}/tree").json() == before

    commit = client.post(f"/sessions/{session_id}/commit", json=request)
    assert commit.status_code == 200
    assert commit.json()["report"] == preview.json()
    # committing does mutate
    assert client.get(f"/sessions/{session_id}/tree").json() != before


def test_preview_deterministic(client, session_id):
    request = {"leaves": [SEEDED_LEAF], "seed": 9}
    first = client.post(f"/sessions/{session_id}/preview", json=request).json()
    second = client.post(f"/sessions/{session_id}/preview", json=request).json()
    assert first == second


def test_preview_sibling_pure_leaves_cost_nothing(client):
    session = client.post("/sessions", json={"csv": PURE_PAIR_CSV}).json()["id"]
    response = client.post(
        f"/sessions/{session}/preview", json={"leaves": ["a1=t", "a1=f"]}
    )
    assert response.status_code == 200
    body = response.json()
    assert body["totalAdded"] == 0
    assert all(row["addedP"] == 0 and row["addedN"] == 0 for row in body["perNode"])


def test_preview_unresolvable_path_names_the_leaf(client, session_id):
    response = client.post(
        f"/sessions/{session_id}/preview",
        json={"leaves": [FREE_LEAF, "a1=t/a2=t"]},
    )
    assert response.status_code == 422
    body = response.json()
    assert body["code"] == "unresolvable-path"
    assert body["location"] == "a1=t/a2=t"


def test_preview_unknown_attribute_names_the_leaf(client, session_id):
    response = client.post(
        f"/sessions/{session_id}/preview", json={"leaves": ["zz=t"]}
    )
    assert response.status_code == 422
    assert response.json()["code"] == "unresolvable-path"
    assert response.json()["location"] == "zz=t"


def test_preview_unknown_strategy_rejected(client, session_id):
    response = client.post(
        f"/sessions/{session_id}/preview",
        json={"leaves": [FREE_LEAF], "strategy": "nope"},
    )
    assert response.status_code == 422
    assert response.json()["code"] == "unknown-strategy"


def test_preview_empty_leaves_rejected(client, session_id):
    response = client.post(f"/sessions/{session_id}/preview", json={"leaves": []})
    assert response.status_code == 422  # pydantic min_length validation


def test_commit_hides_rule_from_returned_tree(client, session_id, benchmark_csv):
    dataset = parse_csv(benchmark_csv)
    path = parse_path(dataset.schema, SEEDED_LEAF)
    response = client.post(
        f"/sessions/{session_id}/commit", json={"leaves": [SEEDED_LEAF]}
    )
    assert response.status_code == 200
    body = response.json()
    new_tree = tree_from_dict(body["tree"])
    new_rules = extract_rules(new_tree)
    # the committed leaf's original rule is gone from the re-induced tree
    original_rules = extract_rules(induce(dataset))
    hidden = [r for r in original_rules if r.path == path]
    assert hidden and hidden[0] not in new_rules
    # and the tree now served equals the tree returned
    served = client.get(f"/sessions/{session_id}/tree").json()["tree"]
    assert served == body["tree"]


def test_commit_then_undo_restores_export_bytes(client, session_id):
    before = client.get(f"/sessions/{session_id}/export").text
    commit = client.post(
        f"/sessions/{session_id}/commit", json={"leaves": [SEEDED_LEAF]}
    )
    assert commit.status_code == 200
    after = client.get(f"/sessions/{session_id}/export").text
    assert after != before

    undo = client.post(f"/sessions/{session_id}/undo")
    assert undo.status_code == 200
    assert undo.json()["atRoot"] is True
    assert client.get(f"/sessions/{session_id}/export").text == before


def test_undo_at_root_is_noop(client, session_id):
    before = client.get(f"/sessions/{session_id}/export").text
    undo = client.post(f"/sessions/{session_id}/undo")
    assert undo.status_code == 200
    assert undo.json()["atRoot"] is True
    assert client.get(f"/sessions/{session_id}/export").text == before


def test_double_commit_double_undo(client, session_id):
    original = client.get(f"/sessions/{session_id}/export").text
    first = client.post(
        f"/sessions/{session_id}/commit", json={"leaves": [FREE_LEAF]}
    )
    assert first.status_code == 200
    middle = client.get(f"/sessions/{session_id}/export").text

    # hide a leaf of the *new* tree for the second commit
    leaves = client.get(f"/sessions/{session_id}/tree").json()["leaves"]
    second = client.post(
        f"/sessions/{session_id}/commit", json={"leaves": [leaves[0]["path"]]}
    )
    assert second.status_code == 200

    undo1 = client.post(f"/sessions/{session_id}/undo").json()
    assert undo1["atRoot"] is False
    assert client.get(f"/sessions/{session_id}/export").text == middle
    undo2 = client.post(f"/sessions/{session_id}/undo").json()
    assert undo2["atRoot"] is True
    assert client.get(f"/sessions/{session_id}/export").text == original


def test_export_counts_and_content_type(client, session_id, benchmark_csv):
    initial = client.get(f"/sessions/{session_id}/export")
    assert initial.status_code == 200
    assert initial.headers["content-type"].startswith("text/csv")
    assert parse_csv(initial.text) == parse_csv(benchmark_csv)

    report = client.post(
        f"/sessions/{session_id}/commit", json={"leaves": [SEEDED_LEAF]}
    ).json()["report"]
    exported = client.get(f"/sessions/{session_id}/export").text
    rows = exported.strip().splitlines()
    assert len(rows) - 1 == 1000 + report["totalAdded"]
    # synthetic rows force the origin column into the export
    assert rows[0].endswith(",origin")


def test_stale_path_after_commit_is_rejected(client):
    session = client.post("/sessions", json={"csv": PURE_PAIR_CSV}).json()["id"]
    assert (
        client.post(f"/sessions/{session}/commit", json={"leaves": ["a1=t"]})
        .status_code
        == 200
    )
    # the tree collapsed to a single all-negative leaf; the old path is stale
    response = client.post(f"/sessions/{session}/preview", json={"leaves": ["a1=t"]})
    assert response.status_code == 422
    assert response.json()["code"] == "unresolvable-path"


def test_sessions_are_isolated(client, benchmark_csv):
    a = client.post("/sessions", json={"csv": benchmark_csv}).json()["id"]
    b = client.post("/sessions", json={"csv": benchmark_csv}).json()["id"]
    before_b = client.get(f"/sessions/{b}/export").text
    assert (
        client.post(f"/sessions/{a}/commit", json={"leaves": [SEEDED_LEAF]})
        .status_code
        == 200
    )
    assert client.get(f"/sessions/{b}/export").text == before_b


def test_commit_seed_changes_fill_bits(client, benchmark_csv):
    exports = []
    for seed in (1, 2):
        sid = client.post("/sessions", json={"csv": benchmark_csv}).json()["id"]
        assert (
            client.post(
                f"/sessions/{sid}/commit",
                json={"leaves": [SEEDED_LEAF], "seed": seed},
            ).status_code
            == 200
        )
        exports.append(client.get(f"/sessions/{sid}/export").text)
    assert exports[0] != exports[1]


def test_cli_hide_report_equals_service_preview(client, session_id, benchmark_csv, tmp_path):
    csv_path = tmp_path / "bench.csv"
    csv_path.write_text(benchmark_csv)
    out = tmp_path / "out.csv"
    report_path = tmp_path / "report.json"
    code = run(
        [
            "hide",
            "--data",
            str(csv_path),
            "--leaf",
            SEEDED_LEAF,
            "--seed",
            "4",
            "--out",
            str(out),
            "--report",
            str(report_path),
        ]
    )
    assert code == 0
    cli_report = json.loads(report_path.read_text())
    preview = client.post(
        f"/sessions/{session_id}/preview",
        json={"leaves": [SEEDED_LEAF], "seed": 4},
    ).json()
    assert preview == cli_report


def test_cli_hide_csv_equals_service_export(client, session_id, benchmark_csv, tmp_path):
    csv_path = tmp_path / "bench.csv"
    csv_path.write_text(benchmark_csv)
    out = tmp_path / "out.csv"
    code = run(
        [
            "hide",
            "--data",
            str(csv_path),
            "--leaf",
            SEEDED_LEAF,
            "--seed",
            "4",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    assert (
        client.post(
            f"/sessions/{session_id}/commit",
            json={"leaves": [SEEDED_LEAF], "seed": 4},
        ).status_code
        == 200
    )
    assert client.get(f"/sessions/{session_id}/export").text == out.read_text()


def test_store_evicts_least_recently_used():
    store = SessionStore(capacity=3)
    ds = parse_csv(PURE_PAIR_CSV)
    ids = [store.create(ds) for _ in range(3)]
    store.get(ids[0])  # refresh the oldest
    store.create(ds)  # evicts ids[1], the least recently used
    store.get(ids[0])
    store.get(ids[2])
    with pytest.raises(ServiceError) as excinfo:
        store.get(ids[1])
    assert excinfo.value.status == 404


def test_store_default_capacity_matches_constant():
    store = SessionStore()
    assert store._capacity == MAX_SESSIONS


def test_session_tracks_timestamps():
    store = SessionStore(capacity=2)
    ds = parse_csv(PURE_PAIR_CSV)
    sid = store.create(ds)
    session = store.get(sid)
    assert session.created <= session.last_used
