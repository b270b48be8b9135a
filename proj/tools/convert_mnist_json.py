#!/usr/bin/env python3
"""Convert the digit set shipped by the npm `mnist` package into IDX files.

The package (https://github.com/cazala/mnist, MIT) contains 10,000 MNIST
digits as JSON arrays of pixels scaled to [0, 1] with three decimals. Pixels
are mapped back to bytes with round(v * 255), the samples are shuffled with a
fixed seed and split into a 6,000-sample training set and a 4,000-sample test
set, written as gzip-compressed IDX files under the standard MNIST names
(train-*, t10k-*).

    npm pack mnist && tar xzf mnist-1.1.0.tgz
    python3 tools/convert_mnist_json.py package/src/digits data/mnist
"""
import gzip
import json
import random
import struct
import sys
from pathlib import Path

TRAIN_SIZE = 6000
SEED = 20240601


def write_idx(dst, prefix, images, labels):
    with gzip.GzipFile(dst / f"{prefix}-images-idx3-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 0x803, len(images), 28, 28))
        for img in images:
            f.write(bytes(img))
    with gzip.GzipFile(dst / f"{prefix}-labels-idx1-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">II", 0x801, len(labels)))
        f.write(bytes(labels))


def main(src, dst):
    samples = []
    for digit in range(10):
        data = json.loads((Path(src) / f"{digit}.json").read_text())["data"]
        assert len(data) % 784 == 0
        for k in range(len(data) // 784):
            pixels = [round(v * 255) for v in data[k * 784:(k + 1) * 784]]
            samples.append((pixels, digit))
    random.Random(SEED).shuffle(samples)
    dst = Path(dst)
    dst.mkdir(parents=True, exist_ok=True)
    for prefix, part in (("train", samples[:TRAIN_SIZE]), ("t10k", samples[TRAIN_SIZE:])):
        write_idx(dst, prefix, [s[0] for s in part], [s[1] for s in part])
        print(f"{dst}/{prefix}: {len(part)} samples")


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    main(sys.argv[1], sys.argv[2])
