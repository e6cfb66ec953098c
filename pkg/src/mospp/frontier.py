"""Incrementally maintained non-dominated sets of projected cost vectors.

Three interchangeable backends answer the same two queries for a set B of
pairwise non-dominated K-vectors:

* membership-style dominance check: does some stored k satisfy k <= b
  componentwise;
* non-dominated update: remove stored keys dominated by b, then store b.

``NdTree`` is an AVL tree ordered lexicographically, which lets both
operations skip most of the set. ``NdList`` is the flat-list reference used
by the slower search variants (optionally kept in lexicographic order).
``ScalarFrontier`` is the one-value degeneration for bi-objective search,
where a projected vector is a single scalar.

Every structure counts dominance comparisons in ``.ndc``: one count per
componentwise comparison against a stored key. Lexicographic comparisons
used only for navigation are not counted.
"""

from __future__ import annotations

from bisect import bisect_left, insort

import numpy as np

from .core import leq


class NdTree:
    """AVL tree over pairwise non-dominated keys, ordered lexicographically.

    Nodes live in per-tree parallel arrays and are addressed by index, with
    -1 as the null child; deleted slots are recycled through a free list.
    Heights count edges (leaf height 0, missing child -1).
    """

    __slots__ = ("dim", "root", "size", "ndc", "debug",
                 "_key", "_left", "_right", "_height", "_free")

    def __init__(self, dim: int, debug: bool = False):
        if dim < 1:
            raise ValueError(f"key dimension must be >= 1, got {dim}")
        self.dim = dim
        self.root = -1
        self.size = 0
        self.ndc = 0
        self.debug = debug
        self._key: list = []
        self._left: list = []
        self._right: list = []
        self._height: list = []
        self._free: list = []

    def __len__(self) -> int:
        return self.size

    @property
    def height(self) -> int:
        return self._height[self.root] if self.root >= 0 else -1

    # -- node plumbing ----------------------------------------------------

    def _new(self, key) -> int:
        free = self._free
        if free:
            i = free.pop()
            self._key[i] = key
            self._left[i] = -1
            self._right[i] = -1
            self._height[i] = 0
            return i
        self._key.append(key)
        self._left.append(-1)
        self._right.append(-1)
        self._height.append(0)
        return len(self._key) - 1

    def _rot_right(self, i: int) -> int:
        left, right, height = self._left, self._right, self._height
        x = left[i]
        left[i] = right[x]
        right[x] = i
        hl = height[left[i]] if left[i] >= 0 else -1
        hr = height[right[i]] if right[i] >= 0 else -1
        height[i] = (hl if hl > hr else hr) + 1
        hl = height[left[x]] if left[x] >= 0 else -1
        height[x] = (hl if hl > height[i] else height[i]) + 1
        return x

    def _rot_left(self, i: int) -> int:
        left, right, height = self._left, self._right, self._height
        x = right[i]
        right[i] = left[x]
        left[x] = i
        hl = height[left[i]] if left[i] >= 0 else -1
        hr = height[right[i]] if right[i] >= 0 else -1
        height[i] = (hl if hl > hr else hr) + 1
        hr = height[right[x]] if right[x] >= 0 else -1
        height[x] = (height[i] if height[i] > hr else hr) + 1
        return x

    def _repair(self, i: int) -> int:
        """Restore the AVL property at i, assuming both subtrees are AVL.

        Unlike the textbook single-delete fixup this tolerates an arbitrary
        height gap, which a bulk filter pass can create: rotations are
        applied repeatedly and the subtree demoted by each rotation is
        repaired recursively.
        """
        left, right, height = self._left, self._right, self._height
        while True:
            l, r = left[i], right[i]
            hl = height[l] if l >= 0 else -1
            hr = height[r] if r >= 0 else -1
            if hl - hr > 1:
                ll, lr = left[l], right[l]
                hll = height[ll] if ll >= 0 else -1
                hlr = height[lr] if lr >= 0 else -1
                if hll < hlr:
                    left[i] = self._rot_left(l)
                i = self._rot_right(i)
                right[i] = self._repair(right[i])
            elif hr - hl > 1:
                rl, rr = left[r], right[r]
                hrl = height[rl] if rl >= 0 else -1
                hrr = height[rr] if rr >= 0 else -1
                if hrr < hrl:
                    right[i] = self._rot_right(r)
                i = self._rot_left(i)
                left[i] = self._repair(left[i])
            else:
                height[i] = (hl if hl > hr else hr) + 1
                return i

    def _pop_min(self, i: int):
        """Detach the minimum node of subtree i; return (min_idx, new_root)."""
        left = self._left
        if left[i] < 0:
            return i, self._right[i]
        m, left[i] = self._pop_min(left[i])
        return m, self._repair(i)

    def _delete_node(self, i: int) -> int:
        """Remove node i, promoting its in-order successor; return new root."""
        left, right = self._left, self._right
        l, r = left[i], right[i]
        self._free.append(i)
        if l < 0:
            return r
        if r < 0:
            return l
        s, nr = self._pop_min(r)
        left[s] = l
        right[s] = nr
        return self._repair(s)

    # -- queries ------------------------------------------------------------

    def check(self, b) -> bool:
        """True iff some stored key is componentwise <= b.

        Keys lexicographically greater than b can never satisfy the test, so
        when b orders below a node only its left subtree is visited; otherwise
        the left subtree is explored before the right one.
        """
        i = self.root
        if i < 0:
            return False
        key, left, right = self._key, self._left, self._right
        dim = self.dim
        visited = 0
        hit = False
        stack = [i]
        pop = stack.pop
        push = stack.append
        while stack:
            i = pop()
            k = key[i]
            visited += 1
            j = 0
            while j < dim:
                if k[j] > b[j]:
                    break
                j += 1
            if j == dim:
                hit = True
                break
            if b < k:
                l = left[i]
                if l >= 0:
                    push(l)
            else:
                r = right[i]
                if r >= 0:
                    push(r)
                l = left[i]
                if l >= 0:
                    push(l)
        self.ndc += visited
        return hit

    def check_2d(self, b) -> bool:
        """Dominance check specialised to 2-component keys.

        For 2-vectors, a node whose key neither dominates b nor orders above
        it cannot hide a dominating key in its left subtree (those keys all
        have strictly larger second component), so a single root-to-leaf
        descent suffices.
        """
        if self.dim != 2:
            raise ValueError(f"check_2d requires key dimension 2, got {self.dim}")
        key, left, right = self._key, self._left, self._right
        i = self.root
        visited = 0
        hit = False
        b0, b1 = b
        while i >= 0:
            k = key[i]
            visited += 1
            if k[0] <= b0 and k[1] <= b1:
                hit = True
                break
            i = left[i] if b < k else right[i]
        self.ndc += visited
        return hit

    def keys(self) -> list:
        """All stored keys in lexicographic order."""
        out = []
        key, left, right = self._key, self._left, self._right
        stack = []
        i = self.root
        while stack or i >= 0:
            while i >= 0:
                stack.append(i)
                i = left[i]
            i = stack.pop()
            out.append(key[i])
            i = right[i]
        return out

    # -- mutation -----------------------------------------------------------

    def insert(self, b) -> None:
        """Insert b; caller guarantees b is non-dominated by and distinct
        from every stored key."""
        if self.debug:
            assert len(b) == self.dim, "key dimension mismatch"
            for k in self.keys():
                assert not leq(k, b), f"insert precondition violated: {k} <= {b}"
        key, left, right = self._key, self._left, self._right

        def ins(i):
            if i < 0:
                return self._new(b)
            k = key[i]
            if b < k:
                left[i] = ins(left[i])
            else:
                if self.debug:
                    assert b != k, f"duplicate key {b}"
                right[i] = ins(right[i])
            return self._repair(i)

        self.root = ins(self.root)
        self.size += 1

    def filter(self, b) -> list:
        """Delete every stored key dominated by b; return the removed keys.

        Only the subtree holding keys lexicographically >= b is explored in
        full: below a node that orders before b the left child is skipped.
        Dominated nodes are deleted post-order so rebalancing happens as the
        recursion unwinds.
        """
        if self.debug:
            assert len(b) == self.dim, "key dimension mismatch"
        key, left, right = self._key, self._left, self._right
        dim = self.dim
        removed = []
        visited = 0

        def walk(i):
            nonlocal visited
            if i < 0:
                return i
            k = key[i]
            if b > k:
                right[i] = walk(right[i])
            else:
                if self.debug:
                    assert b != k, f"filter input equals stored key {b}"
                left[i] = walk(left[i])
                right[i] = walk(right[i])
            visited += 1
            j = 0
            while j < dim:
                if b[j] > k[j]:
                    break
                j += 1
            if j == dim:
                removed.append(k)
                return self._delete_node(i)
            return self._repair(i)

        self.root = walk(self.root)
        self.ndc += visited
        self.size -= len(removed)
        return removed

    def update(self, b) -> list:
        """Make the stored set ND(keys U {b}); returns the keys removed."""
        removed = self.filter(b)
        self.insert(b)
        return removed

    # -- verification ---------------------------------------------------------

    def audit(self, check_nd: bool = True) -> None:
        """Walk the whole tree asserting BST order, stored heights, AVL
        balance and (optionally, quadratic) pairwise non-dominance."""
        key, left, right, height = self._key, self._left, self._right, self._height
        count = 0

        def walk(i, lo, hi):
            nonlocal count
            if i < 0:
                return -1
            count += 1
            k = key[i]
            assert lo is None or k > lo, f"BST order violated at {k}"
            assert hi is None or k < hi, f"BST order violated at {k}"
            hl = walk(left[i], lo, k)
            hr = walk(right[i], k, hi)
            assert height[i] == (hl if hl > hr else hr) + 1, f"stale height at {k}"
            assert -1 <= hl - hr <= 1, f"AVL balance violated at {k}"
            return height[i]

        walk(self.root, None, None)
        assert count == self.size, f"size {self.size} != node count {count}"
        if check_nd:
            ks = self.keys()
            for i in range(len(ks)):
                for j in range(i + 1, len(ks)):
                    assert not leq(ks[i], ks[j]), \
                        f"stored keys comparable: {ks[i]} <= {ks[j]}"


class ToaTree(NdTree):
    """NdTree whose dominance check is the single-descent 2-key variant."""

    __slots__ = ()

    check = NdTree.check_2d


class NdList:
    """Flat list of pairwise non-dominated keys, the baseline backend.

    With ``lex_sorted`` the entries are kept in increasing lexicographic
    order and scans stop early where order allows; otherwise entries stay in
    insertion order and scans run front to back.

    Small lists are plain tuple lists; once a list grows past ``NUMPY_MIN``
    entries it switches (one way) to a numpy row matrix so that the long
    scans of the baseline algorithms run vectorised. Both modes perform the
    same comparisons in the same order, so ``.ndc`` is mode-independent.
    """

    NUMPY_MIN = 48

    __slots__ = ("dim", "lex_sorted", "ndc", "_small", "_arr", "_n")

    def __init__(self, dim: int, lex_sorted: bool = False):
        if dim < 1:
            raise ValueError(f"key dimension must be >= 1, got {dim}")
        self.dim = dim
        self.lex_sorted = lex_sorted
        self.ndc = 0
        self._small: list | None = []
        self._arr = None
        self._n = 0

    def __len__(self) -> int:
        return len(self._small) if self._small is not None else self._n

    def keys(self) -> list:
        if self._small is not None:
            return list(self._small)
        return [tuple(int(x) for x in row) for row in self._arr[: self._n]]

    def _go_numpy(self, entries: list) -> None:
        cap = 2 * len(entries)
        self._arr = np.empty((cap, self.dim), dtype=np.uint64)
        self._arr[: len(entries)] = entries
        self._n = len(entries)
        self._small = None

    def _lex_insertion_point(self, b) -> int:
        """bisect_left over the numpy rows under lexicographic order."""
        arr = self._arr
        dim = self.dim
        lo, hi = 0, self._n
        while lo < hi:
            mid = (lo + hi) // 2
            row = arr[mid]
            less = False
            for j in range(dim):
                rj, bj = row[j], b[j]
                if rj != bj:
                    less = rj < bj
                    break
            if less:
                lo = mid + 1
            else:
                hi = mid
        return lo

    # -- queries ------------------------------------------------------------

    def check(self, b) -> bool:
        """Scan for a key componentwise <= b; stops at the first hit."""
        small = self._small
        if small is not None:
            dim = self.dim
            seen = 0
            for k in small:
                seen += 1
                j = 0
                while j < dim:
                    if k[j] > b[j]:
                        break
                    j += 1
                if j == dim:
                    self.ndc += seen
                    return True
            self.ndc += seen
            return False
        n = self._n
        if n == 0:
            return False
        hits = (self._arr[:n] <= np.array(b, dtype=np.uint64)).all(axis=1)
        first = int(hits.argmax())
        if hits[first]:
            self.ndc += first + 1
            return True
        self.ndc += n
        return False

    # -- mutation -----------------------------------------------------------

    def update(self, b) -> list:
        """Remove entries dominated by b, then add b; returns removed keys.

        Caller guarantees b is non-dominated by and distinct from every
        entry. The unsorted variant scans everything; the sorted variant
        only tests the entries ordering lexicographically after b, since a
        dominated entry cannot order before its dominator.
        """
        b = tuple(b)
        if self._small is not None:
            removed = self._update_small(b)
        else:
            removed = self._update_numpy(b)
        if self._small is not None and len(self._small) >= self.NUMPY_MIN:
            self._go_numpy(self._small)
        return removed

    def _update_small(self, b) -> list:
        small = self._small
        dim = self.dim
        removed = []
        if self.lex_sorted:
            pos = bisect_left(small, b)
            tail = len(small) - pos
            self.ndc += tail
            if tail:
                kept = [k for k in small[pos:] if not _dominated_by(b, k, dim)]
                if len(kept) != tail:
                    removed = [k for k in small[pos:] if _dominated_by(b, k, dim)]
                    del small[pos:]
                    small.extend(kept)
            small.insert(pos, b)
        else:
            self.ndc += len(small)
            for k in small:
                if _dominated_by(b, k, dim):
                    removed.append(k)
            if removed:
                self._small = small = [k for k in small if not _dominated_by(b, k, dim)]
            small.append(b)
        return removed

    def _update_numpy(self, b) -> list:
        arr, n = self._arr, self._n
        bq = np.array(b, dtype=np.uint64)
        if self.lex_sorted:
            pos = self._lex_insertion_point(b)
            tail = n - pos
            self.ndc += tail
            removed = []
            if tail:
                mask = (arr[pos:n] >= bq).all(axis=1)
                if mask.any():
                    removed = [tuple(int(x) for x in row) for row in arr[pos:n][mask]]
                    kept = arr[pos:n][~mask].copy()
                    arr[pos : pos + len(kept)] = kept
                    n = pos + len(kept)
            if n == arr.shape[0]:
                self._grow()
                arr = self._arr
            tail_block = arr[pos:n].copy()
            arr[pos] = bq
            arr[pos + 1 : n + 1] = tail_block
            self._n = n + 1
            return removed
        self.ndc += n
        mask = (arr[:n] >= bq).all(axis=1)
        removed = []
        if mask.any():
            removed = [tuple(int(x) for x in row) for row in arr[:n][mask]]
            kept = arr[:n][~mask].copy()
            arr[: len(kept)] = kept
            n = len(kept)
        if n == arr.shape[0]:
            self._grow()
            arr = self._arr
        arr[n] = bq
        self._n = n + 1
        return removed

    def _grow(self) -> None:
        old = self._arr
        arr = np.empty((2 * old.shape[0], self.dim), dtype=np.uint64)
        arr[: self._n] = old[: self._n]
        self._arr = arr

    # -- verification ---------------------------------------------------------

    def audit(self) -> None:
        ks = self.keys()
        if self.lex_sorted:
            assert all(ks[i] < ks[i + 1] for i in range(len(ks) - 1)), \
                "sorted list out of order"
        assert len(set(ks)) == len(ks), "duplicate entries"
        for i, a in enumerate(ks):
            for j, b in enumerate(ks):
                if i != j:
                    assert not leq(a, b) or a == b, \
                        f"stored keys comparable: {a} <= {b}"


def _dominated_by(b, k, dim) -> bool:
    # b <= k componentwise; with b != k guaranteed this is strict dominance.
    j = 0
    while j < dim:
        if b[j] > k[j]:
            return False
        j += 1
    return True


class ScalarFrontier:
    """Single-scalar frontier for bi-objective search.

    A projected vector has one component there, and the non-dominated set of
    scalars is just their minimum: checks and updates are one comparison and
    one assignment.
    """

    __slots__ = ("value", "ndc")

    def __init__(self):
        self.value = None
        self.ndc = 0

    def __len__(self) -> int:
        return 0 if self.value is None else 1

    def keys(self) -> list:
        return [] if self.value is None else [(self.value,)]

    def check(self, b) -> bool:
        v = self.value
        if v is None:
            return False
        self.ndc += 1
        return v <= b[0]

    def update(self, b) -> list:
        old = self.value
        self.value = b[0]
        return [] if old is None else [(old,)]
