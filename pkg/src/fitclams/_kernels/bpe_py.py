"""Pure-Python BPE training loop.

Reference implementation of the merge-selection kernel; the compiled
extension in `_bpe_cy.pyx` mirrors it statement for statement and must
produce an identical merge list on identical input.
"""

from __future__ import annotations

IMPL = "python"


def train_merges(words, counts, symbols, num_merges):
    """Run `num_merges` greedy merge steps over tokenized word types.

    words: list of lists of symbol ids (mutated in place);
    counts: per-type occurrence counts, aligned with `words`;
    symbols: id -> symbol string (merged symbols are appended);
    returns the ordered list of (left_id, right_id) merges.

    Each step picks the adjacent pair with the highest weighted count;
    ties break on the lexicographically smallest (left, right) string
    pair, then on ids. Occurrences are replaced left to right.
    """
    pair_counts: dict[tuple[int, int], int] = {}
    pair_words: dict[tuple[int, int], set[int]] = {}

    for wi, word in enumerate(words):
        c = counts[wi]
        for i in range(len(word) - 1):
            pair = (word[i], word[i + 1])
            pair_counts[pair] = pair_counts.get(pair, 0) + c
            if pair in pair_words:
                pair_words[pair].add(wi)
            else:
                pair_words[pair] = {wi}

    merges: list[tuple[int, int]] = []
    for _ in range(num_merges):
        best = None
        best_count = 0
        best_key = None
        for pair, cnt in pair_counts.items():
            if cnt <= 0:
                continue
            if cnt < best_count:
                continue
            key = (symbols[pair[0]], symbols[pair[1]], pair[0], pair[1])
            if cnt > best_count or (best is not None and key < best_key):
                best = pair
                best_count = cnt
                best_key = key
        if best is None:
            break

        a, b = best
        new_id = len(symbols)
        symbols.append(symbols[a] + symbols[b])
        merges.append(best)

        for wi in sorted(pair_words.get(best, ())):
            word = words[wi]
            c = counts[wi]
            # Retract this word's pair contributions, rewrite it, re-add.
            for i in range(len(word) - 1):
                pair = (word[i], word[i + 1])
                pair_counts[pair] -= c
                if pair_counts[pair] <= 0:
                    del pair_counts[pair]
                    pair_words.pop(pair, None)
            new_word = []
            i = 0
            n = len(word)
            while i < n:
                if i < n - 1 and word[i] == a and word[i + 1] == b:
                    new_word.append(new_id)
                    i += 2
                else:
                    new_word.append(word[i])
                    i += 1
            words[wi] = new_word
            for i in range(len(new_word) - 1):
                pair = (new_word[i], new_word[i + 1])
                pair_counts[pair] = pair_counts.get(pair, 0) + c
                if pair in pair_words:
                    pair_words[pair].add(wi)
                else:
                    pair_words[pair] = {wi}

        pair_counts.pop(best, None)
        pair_words.pop(best, None)

    return merges
