# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled BPE training loop. Mirrors `bpe_py.train_merges` exactly;
both kernels must return identical merge lists on identical input."""

IMPL = "cython"


def train_merges(list words, list counts, list symbols, Py_ssize_t num_merges):
    cdef dict pair_counts = {}
    cdef dict pair_words = {}
    cdef Py_ssize_t wi, i, n, step
    cdef long c, cnt, best_count
    cdef long a, b, new_id
    cdef list word, new_word
    cdef tuple pair, best, key, best_key
    cdef set bucket

    for wi in range(len(words)):
        word = words[wi]
        c = counts[wi]
        for i in range(len(word) - 1):
            pair = (word[i], word[i + 1])
            pair_counts[pair] = pair_counts.get(pair, 0) + c
            bucket = pair_words.get(pair)
            if bucket is not None:
                bucket.add(wi)
            else:
                pair_words[pair] = {wi}

    merges = []
    for step in range(num_merges):
        best = None
        best_count = 0
        best_key = None
        for pair, count_obj in pair_counts.items():
            cnt = count_obj
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

        a = best[0]
        b = best[1]
        new_id = len(symbols)
        symbols.append(symbols[a] + symbols[b])
        merges.append(best)

        for wi in sorted(pair_words.get(best, ())):
            word = words[wi]
            c = counts[wi]
            for i in range(len(word) - 1):
                pair = (word[i], word[i + 1])
                cnt = pair_counts[pair] - c
                if cnt <= 0:
                    del pair_counts[pair]
                    pair_words.pop(pair, None)
                else:
                    pair_counts[pair] = cnt
            new_word = []
            i = 0
            n = len(word)
            while i < n:
                if i < n - 1 and <long> word[i] == a and <long> word[i + 1] == b:
                    new_word.append(new_id)
                    i += 2
                else:
                    new_word.append(word[i])
                    i += 1
            words[wi] = new_word
            for i in range(len(new_word) - 1):
                pair = (new_word[i], new_word[i + 1])
                pair_counts[pair] = pair_counts.get(pair, 0) + c
                bucket = pair_words.get(pair)
                if bucket is not None:
                    bucket.add(wi)
                else:
                    pair_words[pair] = {wi}

        pair_counts.pop(best, None)
        pair_words.pop(best, None)

    return merges
