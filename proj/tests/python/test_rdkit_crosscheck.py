# convmol - Copyright 2026 The convmol Authors.
# SPDX-License-Identifier: Apache-2.0

import pathlib

import pytest

import convmol

Chem = pytest.importorskip("rdkit.Chem")

ROOT = pathlib.Path(__file__).resolve().parents[2]


def corpus():
    for line in (ROOT / "data" / "molecules.smi").read_text().splitlines():
        if line.strip():
            yield line.split()[0]


def test_canonical_forms_describe_the_same_molecule():
    checked = 0
    for smiles in corpus():
        mol = Chem.MolFromSmiles(smiles)
        if mol is None:
            continue
        ours = convmol.canonical_smiles(smiles)
        assert ours is not None, smiles
        again = Chem.MolFromSmiles(ours)
        assert again is not None, ours
        assert Chem.MolToSmiles(again) == Chem.MolToSmiles(mol), smiles
        checked += 1
    assert checked >= 500


def test_validity_agrees_on_broken_inputs():
    for smiles in ["C(", "C1CC", "CC)C", "c1cccc1", "[Xx]"]:
        assert Chem.MolFromSmiles(smiles) is None
        assert not convmol.is_valid(smiles)
