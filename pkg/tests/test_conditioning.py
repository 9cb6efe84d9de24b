import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from camdiff.conditioning import (
    EMBED_DIM,
    ConditionBundle,
    FileEmbeddingProvider,
    HashProjectionEncoder,
    TextEmbedding,
    build_condition,
    embed_image_sequence,
    embed_text,
    interpolate_embeddings,
)
from camdiff.errors import (
    BadFile,
    EmptyPrompt,
    MissingEmbedding,
    RangeError,
    ShapeMismatch,
)


def test_embedding_shape_enforced():
    with pytest.raises(ShapeMismatch):
        TextEmbedding(np.zeros(10), "p")
    with pytest.raises(ValueError):
        TextEmbedding(np.full(EMBED_DIM, np.nan), "p")


def test_hash_encoder_deterministic_and_normalized():
    enc = HashProjectionEncoder(seed=0)
    a = enc.embed("The camera rotates around the character.")
    b = HashProjectionEncoder(seed=0).embed("The camera rotates around the character.")
    assert np.array_equal(a.values, b.values)
    assert np.linalg.norm(a.values) == pytest.approx(1.0, abs=1e-5)
    # distinct seeds give distinct encoders
    c = HashProjectionEncoder(seed=1).embed("The camera rotates around the character.")
    assert not np.array_equal(a.values, c.values)
    assert enc.provider_id == "hash-projection-v2-seed0"


def test_hash_encoder_token_level():
    enc = HashProjectionEncoder()
    # case and punctuation are normalized away
    a = enc.embed("The camera pans.")
    b = enc.embed("the CAMERA pans")
    assert np.array_equal(a.values, b.values)
    with pytest.raises(EmptyPrompt):
        enc.embed("!!!")


def test_hash_encoder_downweights_ubiquitous_tokens():
    # template-bank IDF: a discriminative token should dominate the pooled
    # vector over words that appear in nearly every template sentence
    enc = HashProjectionEncoder()
    mixed = enc.embed("the camera pushes").values
    rare = enc.embed("pushes").values
    common = enc.embed("the camera").values
    assert float(mixed @ rare) > float(mixed @ common)


def test_embed_text_rejects_empty():
    with pytest.raises(EmptyPrompt):
        embed_text("", HashProjectionEncoder())


def test_file_provider_roundtrip(tmp_path):
    enc = HashProjectionEncoder()
    prompts = ["alpha beta.", "gamma delta.", "epsilon."]
    entries = {p: enc.embed(p).values for p in prompts}
    cache = tmp_path / "cache.bin"
    FileEmbeddingProvider.write_cache(entries, cache)
    provider = FileEmbeddingProvider(cache)
    for p in prompts:
        assert np.allclose(provider.embed(p).values, entries[p], atol=1e-7)
    with pytest.raises(MissingEmbedding):
        provider.embed("unseen prompt")


def test_file_provider_bit_exact_output(tmp_path):
    entries = {"a": np.ones(EMBED_DIM), "b": np.arange(EMBED_DIM, dtype=float)}
    FileEmbeddingProvider.write_cache(entries, tmp_path / "x.bin")
    FileEmbeddingProvider.write_cache(dict(reversed(entries.items())), tmp_path / "y.bin")
    assert (tmp_path / "x.bin").read_bytes() == (tmp_path / "y.bin").read_bytes()


def test_file_provider_rejects_corrupt(tmp_path):
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"NOPE" + b"\x00" * 32)
    with pytest.raises(BadFile):
        FileEmbeddingProvider(bad)
    with pytest.raises(BadFile):
        FileEmbeddingProvider(tmp_path / "missing.bin")


def test_import_json(tmp_path):
    data = {"hello.": list(np.ones(EMBED_DIM))}
    src = tmp_path / "dump.json"
    src.write_text(json.dumps(data))
    n = FileEmbeddingProvider.import_json(src, tmp_path / "c.bin")
    assert n == 1
    provider = FileEmbeddingProvider(tmp_path / "c.bin")
    assert np.allclose(provider.embed("hello.").values, 1.0)


def test_embed_image_sequence(tmp_path):
    frames = np.random.default_rng(0).normal(size=(4, EMBED_DIM)).astype(np.float32)
    path = tmp_path / "frames.npy"
    np.save(path, frames)
    emb = embed_image_sequence(path)
    assert emb.source == "image"
    assert np.allclose(emb.values, frames.mean(axis=0), atol=1e-6)
    # JSON list form
    jpath = tmp_path / "frames.json"
    jpath.write_text(json.dumps(frames.tolist()))
    assert np.allclose(embed_image_sequence(jpath).values, emb.values, atol=1e-6)
    with pytest.raises(BadFile):
        embed_image_sequence(tmp_path / "nope.npy")


def test_interpolate_endpoints_and_midpoint():
    a = TextEmbedding(np.ones(EMBED_DIM, np.float32), "p")
    b = TextEmbedding(np.full(EMBED_DIM, 3.0, np.float32), "p")
    assert np.allclose(interpolate_embeddings(a, b, 0.0).values, a.values)
    assert np.allclose(interpolate_embeddings(a, b, 1.0).values, b.values)
    mid = interpolate_embeddings(a, b, 0.5)
    assert np.allclose(mid.values, 2.0)
    assert mid.source == "interpolated"
    with pytest.raises(RangeError):
        interpolate_embeddings(a, b, 1.5)


@settings(max_examples=50)
@given(st.floats(min_value=0.0, max_value=1.0))
def test_interpolate_affine_property(lam):
    rng = np.random.default_rng(0)
    a = TextEmbedding(rng.normal(size=EMBED_DIM).astype(np.float32), "p")
    b = TextEmbedding(rng.normal(size=EMBED_DIM).astype(np.float32), "p")
    out = interpolate_embeddings(a, b, lam)
    expected = (1 - lam) * a.values + lam * b.values
    assert np.allclose(out.values, expected, atol=1e-6)


def test_condition_bundle_validation():
    emb = TextEmbedding(np.ones(EMBED_DIM, np.float32), "p")
    bundle = build_condition(emb, [[0, 0, 2, 0, 0], [0, 0, 3, 0, 0]])
    assert bundle.has_text and bundle.has_keyframes
    with pytest.raises(ShapeMismatch):
        build_condition(emb, np.zeros((3, 5)))
    with pytest.raises(ValueError):
        # keyframe row violates camera invariants (zero position)
        build_condition(None, np.zeros((2, 5)))
    empty = build_condition(None, None)
    assert not empty.has_text and not empty.has_keyframes
