import pytest
from hypothesis import given, strategies as st

from discussena.codebook import (
    Codebook,
    CodebookEdit,
    DuplicateKeyword,
    DuplicateTopicName,
    EmptyKeyword,
    EmptyName,
    PhraseTooLong,
    Topic,
    UnknownKeyword,
    apply_batch,
    apply_edit,
    build_codebook,
    codebook_from_dict,
    codebook_to_dict,
    keyword_from_stems,
    make_keyword,
    parse_edit,
    validate,
)


class TestMakeKeyword:
    def test_single_word_stemmed(self):
        kw = make_keyword("testing")
        assert kw.display == "testing"
        assert kw.matcher == ("test",)

    def test_hyphen_and_space_forms_share_matcher(self):
        assert make_keyword("black-box").matcher == make_keyword("black box").matcher == ("black", "box")

    def test_stopwords_dropped_from_matcher(self):
        kw = make_keyword("illusion of mastery")
        assert kw.display == "illusion of mastery"
        assert kw.matcher == ("illus", "masteri")

    def test_too_long(self):
        with pytest.raises(PhraseTooLong):
            make_keyword("one two three four")

    def test_hyphen_chain_too_long(self):
        with pytest.raises(PhraseTooLong):
            make_keyword("alpha-beta-gamma-delta")

    def test_all_stopwords_rejected(self):
        with pytest.raises(EmptyKeyword):
            make_keyword("of the")

    def test_empty_rejected(self):
        with pytest.raises(EmptyName):
            make_keyword("   ")

    def test_stemmed_terms_taken_verbatim(self):
        kw = keyword_from_stems("categori_partit")
        assert kw.display == "categori_partit"
        assert kw.matcher == ("categori", "partit")


class TestApplyEdit:
    def test_remove_fall_from_effortful_learning(self, table3_codebook):
        edit = CodebookEdit(kind="remove_keyword", topic_index=0, phrase="fall")
        out = apply_edit(table3_codebook, edit)
        displays = [k.display for k in out.topics[0].keywords]
        assert "fall" not in displays
        assert "land fall" in displays  # only the exact display goes
        assert out.version == table3_codebook.version + 1

    def test_rename_topic(self, table1_codebook):
        out = apply_edit(table1_codebook, CodebookEdit(kind="rename_topic", topic_index=0, name="Observability"))
        assert out.topics[0].name == "Observability"
        assert out.topics[0].keywords == table1_codebook.topics[0].keywords

    def test_duplicate_keyword_rejected(self, table1_codebook):
        # topic 1 already carries the stored stem "choic"
        with pytest.raises(DuplicateKeyword):
            apply_edit(table1_codebook, CodebookEdit(kind="add_keyword", topic_index=1, phrase="choic"))

    def test_same_matcher_different_display_allowed(self, table2_codebook):
        # "black box" and "black-box" both present already; a third spelling is fine
        out = apply_edit(table2_codebook, CodebookEdit(kind="add_keyword", topic_index=3, phrase="Black Box"))
        displays = [k.display for k in out.topics[3].keywords]
        assert displays.count("Black Box") == 1
        assert validate(out) == []

    def test_remove_unknown(self, table1_codebook):
        with pytest.raises(UnknownKeyword):
            apply_edit(table1_codebook, CodebookEdit(kind="remove_keyword", topic_index=0, phrase="nope"))

    def test_replace_keeps_position(self, table2_codebook):
        before = [k.display for k in table2_codebook.topics[3].keywords]
        out = apply_edit(
            table2_codebook,
            CodebookEdit(kind="replace_keyword", topic_index=3, old_phrase="industry", new_phrase="industrial"),
        )
        after = [k.display for k in out.topics[3].keywords]
        assert after.index("industrial") == before.index("industry")

    def test_duplicate_topic_name(self, table2_codebook):
        with pytest.raises(DuplicateTopicName):
            apply_edit(table2_codebook, CodebookEdit(kind="rename_topic", topic_index=0, name="testing"))

    def test_rename_to_empty(self, table2_codebook):
        with pytest.raises(EmptyName):
            apply_edit(table2_codebook, CodebookEdit(kind="rename_topic", topic_index=0, name="  "))

    def test_input_codebook_unchanged(self, table3_codebook):
        version = table3_codebook.version
        snapshot = codebook_to_dict(table3_codebook)
        apply_edit(table3_codebook, CodebookEdit(kind="remove_keyword", topic_index=0, phrase="fall"))
        assert table3_codebook.version == version
        assert codebook_to_dict(table3_codebook) == snapshot
        assert validate(table3_codebook) == []

    def test_add_then_remove_round_trip(self, table2_codebook):
        added = apply_edit(table2_codebook, CodebookEdit(kind="add_keyword", topic_index=4, phrase="coupling"))
        removed = apply_edit(added, CodebookEdit(kind="remove_keyword", topic_index=4, phrase="coupling"))
        assert removed.topics == table2_codebook.topics
        assert removed.version == table2_codebook.version + 2

    def test_batch_bumps_version_once(self, table3_codebook):
        edits = [
            CodebookEdit(kind="remove_keyword", topic_index=0, phrase="fall"),
            CodebookEdit(kind="remove_keyword", topic_index=0, phrase="desire difficulty"),
        ]
        out = apply_batch(table3_codebook, edits)
        assert out.version == table3_codebook.version + 1
        displays = [k.display for k in out.topics[0].keywords]
        assert "fall" not in displays and "desire difficulty" not in displays


class TestFiveTopicLaw:
    def test_no_edit_kind_changes_topic_count(self, table2_codebook):
        for kind in ["rename_topic", "add_keyword", "remove_keyword", "replace_keyword"]:
            assert kind in ("rename_topic", "add_keyword", "remove_keyword", "replace_keyword")
        out = table2_codebook
        out = apply_edit(out, CodebookEdit(kind="rename_topic", topic_index=0, name="x"))
        out = apply_edit(out, CodebookEdit(kind="add_keyword", topic_index=1, phrase="brand new"))
        out = apply_edit(out, CodebookEdit(kind="remove_keyword", topic_index=1, phrase="brand new"))
        assert len(out.topics) == 5

    @given(st.lists(st.sampled_from(["rename", "add", "remove"]), max_size=12))
    def test_random_edit_sequences_keep_five_topics(self, kinds):
        cb = build_codebook(
            "d", [(f"t{i}", [f"seedword{i}"]) for i in range(5)]
        )
        counter = 0
        for kind in kinds:
            counter += 1
            try:
                if kind == "rename":
                    cb = apply_edit(cb, CodebookEdit(kind="rename_topic", topic_index=counter % 5, name=f"name{counter}"))
                elif kind == "add":
                    cb = apply_edit(cb, CodebookEdit(kind="add_keyword", topic_index=counter % 5, phrase=f"word{counter}"))
                else:
                    cb = apply_edit(cb, CodebookEdit(kind="remove_keyword", topic_index=counter % 5, phrase=f"word{counter}"))
            except (UnknownKeyword, DuplicateKeyword):
                pass
            assert len(cb.topics) == 5

    def test_build_rejects_wrong_count(self):
        with pytest.raises(Exception):
            build_codebook("d", [("a", []), ("b", []), ("c", []), ("d", [])])


class TestValidate:
    def test_fresh_codebooks_ok(self, table1_codebook, table2_codebook, table3_codebook):
        assert validate(table1_codebook) == []
        assert validate(table2_codebook) == []
        assert validate(table3_codebook) == []

    def test_four_topics_flagged(self, table2_codebook):
        broken = Codebook(discussion_id="d", version=1, topics=table2_codebook.topics[:4])
        assert any("topic count" in v for v in validate(broken))

    def test_duplicate_names_flagged(self, table2_codebook):
        topics = list(table2_codebook.topics)
        topics[1] = Topic(name=topics[0].name, keywords=topics[1].keywords)
        broken = Codebook(discussion_id="d", version=1, topics=tuple(topics))
        assert any("duplicate topic name" in v for v in validate(broken))

    def test_repeated_display_flagged(self, table2_codebook):
        topics = list(table2_codebook.topics)
        kw = topics[0].keywords[0]
        topics[0] = Topic(name=topics[0].name, keywords=topics[0].keywords + (kw,))
        broken = Codebook(discussion_id="d", version=1, topics=tuple(topics))
        assert any("twice" in v for v in validate(broken))

    def test_empty_topic_is_legal(self, table3_codebook):
        assert table3_codebook.topics[4].keywords == ()
        assert validate(table3_codebook) == []


class TestSerialization:
    def test_round_trip(self, table3_codebook):
        data = codebook_to_dict(table3_codebook)
        assert codebook_from_dict(data) == table3_codebook

    def test_parse_edit_rejects_unknown_kind(self):
        with pytest.raises(Exception):
            parse_edit({"kind": "drop_topic", "topic_index": 0})

    def test_parse_edit_roundtrip(self):
        edit = parse_edit({"kind": "add_keyword", "topic_index": 2, "phrase": "spacing out"})
        assert edit == CodebookEdit(kind="add_keyword", topic_index=2, phrase="spacing out")
