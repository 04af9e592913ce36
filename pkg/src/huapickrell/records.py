"""Result files: delimited text tables, run manifests and sample archives.

Table format::

    # huapickrell <command>
    # manifest: <name>.manifest
    # columns: col1,col2,...
    v11,v12,...

Numbers are written with ``repr`` so a parse/emit cycle reproduces the file
byte for byte.  Manifests are INI files with a ``[run]`` section echoing the
configuration and a ``[result]`` section holding the library version and the
sha256 of the table.
"""
import configparser
import hashlib
import io
import json
import struct

import numpy as np


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _parse(tok):
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        return float(tok)
    except ValueError:
        return tok


def emit_table(command, columns, rows, manifest_name):
    buf = io.StringIO()
    buf.write(f"# huapickrell {command}\n")
    buf.write(f"# manifest: {manifest_name}\n")
    buf.write("# columns: " + ",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def parse_table(text):
    """Return (command, manifest_name, columns, rows)."""
    command = manifest = None
    columns = []
    rows = []
    for line in text.splitlines():
        if line.startswith("# huapickrell "):
            command = line[len("# huapickrell "):]
        elif line.startswith("# manifest: "):
            manifest = line[len("# manifest: "):]
        elif line.startswith("# columns: "):
            columns = line[len("# columns: "):].split(",")
        elif line.startswith("#") or not line.strip():
            continue
        else:
            rows.append([_parse(t) for t in line.split(",")])
    return command, manifest, columns, rows


def content_hash(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _ini():
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keep key case (N vs n)
    return cp


def emit_manifest(config, version, digest, extra=None):
    cp = _ini()
    cp["run"] = {k: _fmt(v) if not isinstance(v, (list, tuple)) else " ".join(_fmt(x) for x in v)
                 for k, v in sorted(config.items()) if v is not None}
    result = {"library_version": version, "sha256": digest}
    if extra:
        result.update({k: _fmt(v) for k, v in extra.items()})
    cp["result"] = result
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def parse_manifest(text):
    cp = _ini()
    cp.read_string(text)
    return {sec: dict(cp[sec]) for sec in cp.sections()}


# ---------------------------------------------------------------------------
# sample archives


def archive_records(spectra, seed, N, s, start=0):
    """One record per sample: seed, index, N, s and descending eigenvalues."""
    s = complex(s)
    for i, lam in enumerate(np.asarray(spectra)):
        yield {
            "seed": int(seed),
            "index": start + i,
            "N": int(N),
            "s_re": s.real,
            "s_im": s.imag,
            "eigenvalues": [float(v) for v in np.sort(lam)[::-1]],
        }


def write_archive(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, separators=(",", ":")) + "\n")


def read_archive(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def archive_spectra(records):
    """Stack archive eigenvalues into an array of shape (count, N)."""
    return np.array([r["eigenvalues"] for r in records], dtype=float)


def write_matrix_dump(path, matrices):
    """Little-endian dump: int64 dimension, then row-major (re, im) float64 pairs."""
    with open(path, "wb") as fh:
        for X in matrices:
            X = np.asarray(X, dtype=complex)
            fh.write(struct.pack("<q", X.shape[0]))
            pairs = np.empty(X.shape + (2,), dtype="<f8")
            pairs[..., 0] = X.real
            pairs[..., 1] = X.imag
            fh.write(pairs.tobytes(order="C"))


def read_matrix_dump(path):
    out = []
    with open(path, "rb") as fh:
        while True:
            head = fh.read(8)
            if not head:
                break
            (n,) = struct.unpack("<q", head)
            data = np.frombuffer(fh.read(16 * n * n), dtype="<f8").reshape(n, n, 2)
            out.append(data[..., 0] + 1j * data[..., 1])
    return out
