#!/usr/bin/env python3
"""Independent big-integer oracle for the Poseidon permutation and Merkle
merge, used to freeze the expected vectors consumed by the C++ tests.

Everything here is plain Python integer arithmetic mod P; none of the C++
reduction or lane machinery is involved.
"""

import json
import pathlib

P = 2**64 - 2**32 + 1

STATE_WIDTH = 12
RATE = 8
CAPACITY = 4
HALF_FULL_ROUNDS = 4
PARTIAL_ROUNDS = 22

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_constants():
    data = json.loads((ROOT / "data" / "poseidon_constants.json").read_text())
    C = [[int(x) for x in block] for block in data["C"]]
    M = [[int(x) for x in row] for row in data["M"]]
    S = [([int(x) for x in b["v0"]], [int(x) for x in b["v1"]]) for b in data["S"]]
    return C, M, S


def sbox(x):
    return pow(x, 7, P)


def mds(state, M):
    return [sum(state[i] * M[i][j] for i in range(STATE_WIDTH)) % P
            for j in range(STATE_WIDTH)]


def mds_partial(state, v0, v1):
    tmp = sum(state[i] * v0[i] for i in range(STATE_WIDTH)) % P
    old0 = state[0]
    out = [(state[i] + old0 * v1[i]) % P for i in range(STATE_WIDTH)]
    out[0] = tmp
    return out


def permute(state, C, M, S):
    s = [(state[i] + C[0][i]) % P for i in range(STATE_WIDTH)]
    for r in range(HALF_FULL_ROUNDS):
        s = [sbox(x) for x in s]
        s = mds(s, M)
        s = [(s[i] + C[1 + r][i]) % P for i in range(STATE_WIDTH)]
    for r in range(PARTIAL_ROUNDS):
        s[0] = sbox(s[0])
        s = mds_partial(s, S[r][0], S[r][1])
    for r in range(HALF_FULL_ROUNDS):
        s = [sbox(x) for x in s]
        s = mds(s, M)
        s = [(s[i] + C[1 + HALF_FULL_ROUNDS + r][i]) % P for i in range(STATE_WIDTH)]
    return s


def hash_block(input8, capacity4, C, M, S):
    assert len(input8) == RATE and len(capacity4) == CAPACITY
    out = permute(list(input8) + list(capacity4), C, M, S)
    return out[:4]


def linear_hash(elements, C, M, S):
    chunks = max(1, -(-len(elements) // RATE))
    capacity = [0] * CAPACITY
    out = None
    for c in range(chunks):
        block = [elements[c * RATE + i] if c * RATE + i < len(elements) else 0
                 for i in range(RATE)]
        out = permute(block + capacity, C, M, S)
        capacity = out[RATE:RATE + CAPACITY]
    return out[:4]


def merkle_root(leaves, C, M, S):
    level = [hash_block(leaf, [0] * 4, C, M, S) for leaf in leaves]
    while len(level) > 1:
        level = [hash_block(level[i] + level[i + 1], [0] * 4, C, M, S)
                 for i in range(0, len(level), 2)]
    return level[0]


class SplitMix64:
    """Matches the C++ SplitMix64 word for word."""

    MASK = (1 << 64) - 1

    def __init__(self, seed):
        self.state = seed & self.MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def next_element(self):
        while True:
            v = self.next()
            if v < P:
                return v


def strs(values):
    return [str(v) for v in values]


def main():
    C, M, S = load_constants()

    vectors = {}

    zero_state = [0] * STATE_WIDTH
    vectors["permute_zero"] = strs(permute(zero_state, C, M, S))

    rng = SplitMix64(0x5EED_0001)
    random_states = []
    for _ in range(100):
        state = [rng.next_element() for _ in range(STATE_WIDTH)]
        random_states.append({
            "input": strs(state),
            "output": strs(permute(state, C, M, S)),
        })
    vectors["permute_random_seed"] = str(0x5EED_0001)
    vectors["permute_random"] = random_states

    vectors["hash_block_zero"] = strs(hash_block([0] * 8, [0] * 4, C, M, S))

    rng = SplitMix64(0x5EED_0002)
    lh16 = [rng.next_element() for _ in range(16)]
    vectors["linear_hash_16_seed"] = str(0x5EED_0002)
    vectors["linear_hash_16_input"] = strs(lh16)
    vectors["linear_hash_16"] = strs(linear_hash(lh16, C, M, S))

    rng = SplitMix64(0x5EED_0003)
    merkle_cases = []
    for n in (1, 2, 4):
        leaves = [[rng.next_element() for _ in range(8)] for _ in range(n)]
        merkle_cases.append({
            "leaf_count": n,
            "leaves": [strs(leaf) for leaf in leaves],
            "root": strs(merkle_root(leaves, C, M, S)),
        })
    vectors["merkle_seed"] = str(0x5EED_0003)
    vectors["merkle"] = merkle_cases

    path = ROOT / "tests" / "data" / "poseidon_vectors.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(vectors, indent=1) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
