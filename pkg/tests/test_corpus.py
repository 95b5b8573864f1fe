import datetime as dt

import pytest

from atlas.corpus import (
    Corpus,
    MapPoint,
    Project,
    TopicLabel,
    load_corpus,
    parse_date,
    save_corpus,
    sort_topics,
    validate_corpus,
)


def make_project(pid="p1", **kw):
    defaults = dict(
        title=f"Project {pid}",
        description="desc",
        group="g",
        date=dt.date(2020, 1, 1),
        embedding=(1.0, 0.0, 2.0),
        position=MapPoint(0.5, -0.5),
    )
    defaults.update(kw)
    return Project(id=pid, **defaults)


def test_empty_corpus_has_no_violations():
    assert validate_corpus(Corpus(projects=())) == []


def test_duplicate_project_id_reported():
    corpus = Corpus(projects=(make_project("p1"), make_project("p1")))
    violations = validate_corpus(corpus)
    assert len(violations) == 1
    assert violations[0].subject == "p1"
    assert violations[0].rule == "id unique"


def test_topic_count_mismatch_reported():
    topic = TopicLabel(text="ai", count=3, project_ids=frozenset({"p1", "p2"}),
                       position=MapPoint(0, 0))
    corpus = Corpus(projects=(make_project("p1"), make_project("p2")), topics=(topic,))
    rules = {v.rule for v in validate_corpus(corpus)}
    assert "count == |project_ids|" in rules


def test_unresolved_topic_member_reported():
    topic = TopicLabel(text="ai", count=1, project_ids=frozenset({"ghost"}),
                       position=MapPoint(0, 0))
    corpus = Corpus(projects=(make_project("p1"),), topics=(topic,))
    assert any("resolves" in v.rule for v in validate_corpus(corpus))


def test_topic_order_violation_reported():
    t1 = TopicLabel("b", 1, frozenset({"p1"}), MapPoint(0, 0))
    t2 = TopicLabel("a", 2, frozenset({"p1", "p2"}), MapPoint(0, 0))
    corpus = Corpus(projects=(make_project("p1"), make_project("p2")), topics=(t1, t2))
    assert any("sorted" in v.rule for v in validate_corpus(corpus))
    assert validate_corpus(Corpus(projects=corpus.projects, topics=(t2, t1))) == []


def test_validate_is_idempotent():
    corpus = Corpus(projects=(make_project("p1"), make_project("p1", title="")))
    assert validate_corpus(corpus) == validate_corpus(corpus)


def test_parse_date_year_only_normalizes_to_january_first():
    assert parse_date("2018") == dt.date(2018, 1, 1)
    assert parse_date("2018-06-15") == dt.date(2018, 6, 15)
    assert parse_date("") is None
    assert parse_date(None) is None


def test_date_range_spans_member_dates():
    corpus = Corpus(projects=(
        make_project("p1", date=dt.date(2011, 3, 1)),
        make_project("p2", date=dt.date(2019, 7, 4)),
        make_project("p3", date=None),
    ))
    assert corpus.date_range == (dt.date(2011, 3, 1), dt.date(2019, 7, 4))


def test_sort_topics_orders_count_desc_then_text_asc():
    topics = [
        TopicLabel("b", 2, frozenset({"p1", "p2"}), MapPoint(0, 0)),
        TopicLabel("a", 2, frozenset({"p1", "p3"}), MapPoint(0, 0)),
        TopicLabel("c", 5, frozenset({"p1", "p2", "p3", "p4", "p5"}), MapPoint(0, 0)),
    ]
    assert [t.text for t in sort_topics(topics)] == ["c", "a", "b"]


def test_round_trip_preserves_fields(tmp_path):
    corpus = Corpus(
        projects=(
            make_project("p1"),
            make_project("p2", date=None, group="other"),
        ),
        topics=(TopicLabel("ai", 2, frozenset({"p1", "p2"}), MapPoint(1.0, 2.0)),),
    )
    save_corpus(corpus, str(tmp_path))
    loaded = load_corpus(str(tmp_path))
    assert validate_corpus(loaded) == []
    assert loaded.projects == corpus.projects
    assert loaded.topics == corpus.topics
