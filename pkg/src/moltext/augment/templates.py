"""Prompt templates for caption rewriting.

Three templates ship with the package: molecule captions, molecule
descriptions (for property datasets whose descriptions were produced from
SMILES), and image captions. Placeholders use {SMILES}, {caption} and
{description}; each placeholder appearing in a message resolves exactly
once.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..dataset import MoleculeRecord
from ..errors import UnresolvedPlaceholder
from ..hashing import stable_hash_hex

_PLACEHOLDER_RE = re.compile(r"\{([A-Za-z]+)\}")


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    instruction: str
    message: str

    def __post_init__(self):
        names = _PLACEHOLDER_RE.findall(self.message)
        if len(names) != len(set(names)):
            raise ValueError(f"template {self.name}: placeholders must appear once")

    def placeholder_names(self) -> tuple[str, ...]:
        return tuple(_PLACEHOLDER_RE.findall(self.message))

    def content_hash(self) -> str:
        return stable_hash_hex("template", self.name, self.instruction, self.message)


MOLECULE_CAPTION = PromptTemplate(
    name="molecule_caption",
    instruction=(
        "You are now a chemical specialist in rewriting captions for a molecule "
        "in SMILES format. Make sure those captions describe the given molecule "
        "correctly and precisely based on your two inputs (SMILES and Caption of "
        "it). Also, make sure your rewriting captions do not include the input "
        "SMILES. Write the response without using linebreaks, newlines, or "
        "special characters such as \"\\t\" or \"\\n\"."
    ),
    message=(
        "SMILES string of target molecule: {SMILES}.\n"
        "Description of the molecule: {caption}.\n"
        "Task: Rewrite the following molecule with its SMILES and caption. "
        "The newly rewritten caption should be elaborate, descriptive, and "
        "concise, highlighting the key structural features and biological "
        "activities of the molecule. Only output rewritten caption without any "
        "header and linebreak.\n"
        "Answer:"
    ),
)

MOLECULE_DESCRIPTION = PromptTemplate(
    name="molecule_description",
    instruction=(
        "You are now a chemical specialist in rewriting descriptions for a "
        "molecule in SMILES format. Make sure those descriptions describe the "
        "given molecule correctly and precisely based on your two inputs (SMILES "
        "and Description of it). Also, make sure your rewriting captions do not "
        "include the input SMILES."
    ),
    message=(
        "SMILES string of target molecule: {SMILES}.\n"
        "Description of the molecule: {description}.\n"
        "Task: Rewrite the following molecule with its SMILES and description. "
        "The newly rewritten caption should be elaborate, descriptive, and "
        "concise, highlighting the key structural features and biological "
        "activities of the molecule. Only output rewritten caption without any "
        "header and linebreak.\n"
        "Answer:"
    ),
)

IMAGE_CAPTION = PromptTemplate(
    name="image_caption",
    instruction=(
        "You are now a specialist in rewriting descriptions for an image. "
        "Make sure those descriptions describe the given image correctly and "
        "precisely."
    ),
    message=(
        "Description of the image: {description}.\n"
        "Task: Rewrite the following description. The newly rewritten caption "
        "should be elaborate, descriptive, and concise, highlighting the key "
        "knowledge of the molecule. Only output rewritten caption without any "
        "header and linebreak.\n"
        "Answer:"
    ),
)

TEMPLATES = {
    t.name: t for t in (MOLECULE_CAPTION, MOLECULE_DESCRIPTION, IMAGE_CAPTION)
}


def render_message(template: PromptTemplate, record: MoleculeRecord) -> str:
    """Message body with placeholders substituted from the record."""
    values = {
        "SMILES": record.smiles,
        "caption": record.caption,
        "description": record.caption,
    }

    def substitute(match: re.Match) -> str:
        name = match.group(1)
        value = values.get(name)
        if value is None or value == "":
            raise UnresolvedPlaceholder(name)
        return value

    return _PLACEHOLDER_RE.sub(substitute, template.message)


def build_prompt(template: PromptTemplate, record: MoleculeRecord) -> str:
    """Full prompt text: instruction, blank line, substituted message."""
    return template.instruction + "\n\n" + render_message(template, record)
