# convmol - Copyright 2026 The convmol Authors.
# SPDX-License-Identifier: Apache-2.0

"""Python bindings for the convmol toolkit."""

import json as _json

try:
    from . import _convmol as _core
except ImportError:
    import _convmol as _core

BackendError = _core.BackendError
EvalError = _core.EvalError
Lexicon = _core.Lexicon
RetrievalBackend = _core.RetrievalBackend
SmilesError = _core.SmilesError

bleu = _core.bleu
canonical_smiles = _core.canonical_smiles
compose_query = _core.compose_query
exact_match = _core.exact_match
fingerprint_hex = _core.fingerprint_hex
is_valid = _core.is_valid
levenshtein = _core.levenshtein
replace_synonyms = _core.replace_synonyms
rouge = _core.rouge
similarity = _core.similarity
span_corrupt = _core.span_corrupt
split_sentences = _core.split_sentences
tanimoto = _core.tanimoto
word_tokens = _core.word_tokens


def graph(smiles):
    """Atoms and bonds of a molecule as plain dicts."""
    return _json.loads(_core.graph_json(smiles))


def parse_error(smiles):
    """The parse error of `smiles` as a dict, or None when it is valid."""
    text = _core.parse_error_json(smiles)
    return None if text is None else _json.loads(text)["error"]


def evaluate(task, predictions, references):
    return _json.loads(_core.evaluate_json(task, str(predictions), str(references)))


__all__ = [name for name in dir() if not name.startswith("_")]
