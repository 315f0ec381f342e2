#!/usr/bin/env python3
"""Independent reference values for test_keymat / test_encoder.

Uses only the Python standard library (hmac, hashlib, math). Output is pasted
into the C++ tests; rerun after any intentional format change.
"""
import hashlib
import hmac
import math
import struct

KEY = "0123456789abcdef0123456789abcdef"


def layer_seed(key_hex, i):
    d = hmac.new(key_hex.encode(), str(i).encode(), hashlib.sha256).digest()
    bits = min(len(key_hex), 64)
    return int.from_bytes(d, "big") % (1 << bits)


def drbg(seed, j):
    d = hmac.new(struct.pack(">Q", seed), struct.pack(">Q", j), hashlib.sha256).digest()
    return (int.from_bytes(d[:8], "big") >> 11) / 2.0**53


def linear_encoder(key_hex, layers, dim, bound=0.9, eps=1e-6):
    b = bound / math.sqrt(dim)
    out = []
    for i in range(1, layers + 1):
        seed = layer_seed(key_hex, i)
        j = 0
        w = []
        while len(w) < dim * dim:
            v = (2.0 * drbg(seed, j) - 1.0) * b
            j += 1
            if abs(v) >= eps:
                w.append(v)
        out.append(w)
    return out


def encode(weights, dim, text):
    data = text.encode()
    nblocks = (len(data) + dim - 1) // dim
    hexs = ""
    for bi in range(nblocks):
        x = [0.0] * dim
        for k in range(dim):
            idx = bi * dim + k
            if idx < len(data):
                x[k] = data[idx] / 256.0
        for w in weights:
            y = list(x)
            for r in range(dim):
                y[r] += sum(w[r * dim + c] * x[c] for c in range(dim))
            x = y
        for v in x:
            c = min(max(v, -2.0), 2.0)
            q = int(math.floor((c + 2.0) / 4.0 * 255.0 + 0.5))
            hexs += "%02x" % q
    return hexs


if __name__ == "__main__":
    print("seed1", layer_seed(KEY, 1))
    print("seed2", layer_seed(KEY, 2))
    print("seed1_k8", layer_seed("0123abcd", 1))
    print("drbg", [repr(drbg(layer_seed(KEY, 1), j)) for j in range(3)])
    w = linear_encoder(KEY, 2, 4)
    print("w0", [repr(v) for v in w[0][:4]])
    print("w1", [repr(v) for v in w[1][:4]])
    print("ct", encode(w, 4, "hello, world"))
