"""Builds data/molecules.smi and data/lexicon.jsonl.

Requires RDKit and a built `convmol-canon`-style filter (path via
CONVMOL_CANON). Every emitted molecule is checked twice: RDKit must accept
it, and the convmol canonical form must describe the same molecule as
RDKit's reading of the input.
"""

import itertools
import json
import os
import random
import subprocess
import sys
from pathlib import Path

from rdkit import Chem, RDLogger

RDLogger.DisableLog("rdApp.*")

ROOT = Path(__file__).resolve().parent.parent

SUBSTITUENTS = [
    "C", "CC", "O", "OC", "N", "N(C)C", "F", "Cl", "Br", "I", "C(=O)O",
    "C(=O)OC", "C(N)=O", "C#N", "C=O", "C(F)(F)F", "S(=O)(=O)N", "[N+](=O)[O-]",
    "C(C)C", "SC", "NC(C)=O", "CO", "C(C)=O", "OC(C)=O",
]

SCAFFOLDS = [
    "c1ccc({0})cc1",
    "c1ccc({0})c({1})c1",
    "c1cc({0})ccc1{1}",
    "c1cc({0})cc({1})c1",
    "c1ccnc({0})c1",
    "c1cc({0})ccn1",
    "c1csc({0})c1",
    "c1coc({0})c1",
    "c1ccc2cc({0})ccc2c1",
    "C1CCC({0})CC1",
    "C1CCN(C1){0}",
    "CC({0})C{1}",
    "{0}CCC{1}",
    "c1ncc({0})cn1",
    "c1ccc2[nH]cc({0})c2c1",
]


def rdkit_key(smiles):
    mol = Chem.MolFromSmiles(smiles)
    if mol is None:
        return None
    Chem.RemoveStereochemistry(mol)
    return Chem.MolToSmiles(mol)


def convmol_canonical(lines, binary):
    out = subprocess.run([binary], input="\n".join(lines) + "\n",
                         capture_output=True, text=True, check=True)
    return out.stdout.splitlines()


def main():
    binary = os.environ.get("CONVMOL_CANON")
    if not binary:
        sys.exit("set CONVMOL_CANON to a SMILES canonicalizer binary")
    rng = random.Random(20261019)

    seed = []
    for line in (ROOT / "scripts" / "lexicon_seed.tsv").read_text().splitlines():
        name, smiles = line.split("\t")
        seed.append((name, smiles))

    candidates = [s for _, s in seed]
    for scaffold in SCAFFOLDS:
        arity = scaffold.count("{")
        combos = list(itertools.product(SUBSTITUENTS, repeat=arity))
        rng.shuffle(combos)
        for combo in combos[:30]:
            candidates.append(scaffold.format(*combo))

    ours = convmol_canonical(candidates, binary)
    seen = set()
    corpus = []
    rejected = 0
    for smiles, canon in zip(candidates, ours):
        key = rdkit_key(smiles)
        if key is None or canon.startswith("ERR"):
            rejected += 1
            continue
        if rdkit_key(canon) != key:
            sys.exit(f"canonical form disagrees with RDKit: {smiles} -> {canon}")
        if key in seen:
            continue
        seen.add(key)
        corpus.append(smiles)

    (ROOT / "data" / "molecules.smi").write_text("\n".join(corpus) + "\n")
    with open(ROOT / "data" / "lexicon.jsonl", "w") as fh:
        for name, smiles in seed:
            fh.write(json.dumps({"name": name, "smiles": smiles,
                                 "preferred_name": name}) + "\n")
    print(f"{len(corpus)} molecules, {rejected} rejected, {len(seed)} names")


if __name__ == "__main__":
    main()
