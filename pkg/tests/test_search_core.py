import math

import numpy as np
import pytest

from component.scripts.errors import EmptyQueueError
from component.scripts.search_core import (
    INF,
    PriorityQueue,
    RecordTable,
    SearchKey,
    key_compare,
)


def test_key_compare_is_lexicographic():
    assert key_compare(SearchKey(3, 9), SearchKey(4, 0)) == -1
    assert key_compare(SearchKey(3, 1), SearchKey(3, 2)) == -1
    assert key_compare(SearchKey(3, 1), SearchKey(3, 1)) == 0
    assert SearchKey(4, 0) > SearchKey(3, 9)


def test_key_rejects_nan_and_mixed_arity():
    with pytest.raises(ValueError):
        SearchKey(math.nan, 0)
    with pytest.raises(TypeError):
        key_compare(SearchKey(1, 0), SearchKey(1, arity=1))


def test_one_element_key_ignores_k2():
    assert SearchKey(2.0, 5.0, arity=1) == SearchKey(2.0, arity=1)
    assert SearchKey.infinite(arity=1).as_tuple() == (INF,)


def test_pop_returns_the_lowest_key():
    queue = PriorityQueue()
    queue.insert("A", SearchKey(5, 3))
    queue.insert("B", SearchKey(5, 2))
    queue.insert("C", SearchKey(4, 9))

    assert queue.pop() == ("C", SearchKey(4, 9))
    assert queue.pop()[0] == "B"
    assert queue.pop()[0] == "A"


def test_insert_replaces_the_key():
    queue = PriorityQueue()
    queue.insert("A", SearchKey(5, 3))
    queue.insert("A", SearchKey(2, 0))

    assert len(queue) == 1
    assert queue.pop() == ("A", SearchKey(2, 0))
    assert not queue


def test_empty_queue():
    queue = PriorityQueue()
    assert queue.top_key() == SearchKey.infinite()
    with pytest.raises(EmptyQueueError):
        queue.pop()
    with pytest.raises(EmptyQueueError):
        queue.top()


def test_remove_and_contains():
    queue = PriorityQueue()
    queue.insert("A", SearchKey(1, 0))
    queue.insert("B", SearchKey(2, 0))
    queue.remove("A")
    queue.remove("missing")

    assert "A" not in queue and "B" in queue
    assert queue.top() == "B"
    assert queue.pop() == ("B", SearchKey(2, 0))


def test_equal_keys_pop_in_insertion_order():
    queue = PriorityQueue(arity=1)
    for name in "xyz":
        queue.insert(name, SearchKey(1.0, arity=1))

    assert [queue.pop()[0] for _ in range(3)] == ["x", "y", "z"]


def test_queue_rejects_keys_of_another_arity():
    with pytest.raises(TypeError):
        PriorityQueue(arity=1).insert("A", SearchKey(1, 1))


def test_rebuild_recomputes_keys():
    queue = PriorityQueue(arity=1)
    for i in range(5):
        queue.insert(i, SearchKey(i, arity=1))
    queue.rebuild(lambda node: SearchKey(-node, arity=1))

    assert [queue.pop()[0] for _ in range(5)] == [4, 3, 2, 1, 0]


def test_popped_keys_never_decrease():
    rng = np.random.default_rng(0)
    queue, last = PriorityQueue(), None

    for _ in range(2000):
        if queue and rng.random() < 0.4:
            _, key = queue.pop()
            assert last is None or key >= last
            last = key
            continue
        node = int(rng.integers(50))
        k1 = float(rng.integers(20))
        floor = last.k1 if last is not None else 0.0
        queue.insert(node, SearchKey(floor + 1 + k1, float(rng.integers(5))))


def test_record_table_creates_records_on_touch():
    records = RecordTable()
    assert records.g("a") == INF and "a" not in records

    records["a"].g = 3.0
    assert records.g("a") == 3.0
    assert records.rhs("a") == INF
