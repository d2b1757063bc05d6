"""Build the Porter conformance vocabulary and its reference stems.

Words are drawn (seeded) from the wordfreq English frequency list; stems come
(and the stem of each stem) from NLTK's PorterStemmer in ORIGINAL_ALGORITHM mode, which follows the 1980
rule set without later extensions.

    python3 scripts/gen_porter_vocab.py crates/core/tests/data/porter_vocab.tsv
"""
import random
import sys

from nltk.stem.porter import PorterStemmer
from wordfreq import top_n_list

SEED = 1980
N_WORDS = 1000


def main(out_path):
    pool = [w for w in top_n_list("en", 40000) if w.isascii() and w.isalpha() and w.islower()]
    rng = random.Random(SEED)
    words = sorted(rng.sample(pool, N_WORDS))
    stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
    with open(out_path, "w") as fh:
        for w in words:
            stem = stemmer.stem(w)
            fh.write(f"{w}\t{stem}\t{stemmer.stem(stem)}\n")


if __name__ == "__main__":
    main(sys.argv[1])
