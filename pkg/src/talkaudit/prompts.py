"""Prompt assembly for the transcript auditor.

Five prompt variants share four ordered sections: an introduction, an optional
accessibility overview (general guidance or a WCAG digest), task instructions
(basic, or contextual with an extra relational-analysis step), and the
transcript payload itself, always last. The static section texts ship as data
files next to this module so they can be inspected and diffed; the
``general_contextual.txt`` file is the canonical full static prompt and is
byte-identical to the concatenation of its three sections.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources

from .transcript import Transcript


class PromptVariant(str, Enum):
    BASE = "base"
    GENERAL = "general"
    CONTEXTUAL = "contextual"
    GENERAL_CONTEXTUAL = "general_contextual"
    WCAG_CONTEXTUAL = "wcag_contextual"


class EmptyTranscriptError(Exception):
    """An audit prompt cannot be assembled from a transcript with no entries."""


@dataclass(frozen=True)
class PromptSection:
    name: str  # introduction | accessibility | instruction | transcript
    text: str


@dataclass(frozen=True)
class PromptSpec:
    variant: PromptVariant
    sections: tuple[PromptSection, ...]
    screen_id: str

    @property
    def text(self) -> str:
        return "\n\n".join(section.text for section in self.sections)

    def section(self, name: str) -> PromptSection | None:
        for section in self.sections:
            if section.name == name:
                return section
        return None


@lru_cache(maxsize=None)
def load_prompt_text(name: str) -> str:
    path = resources.files("talkaudit") / "data" / "prompts" / f"{name}.txt"
    return path.read_text(encoding="utf-8").rstrip("\n")


def canonical_general_contextual_text() -> str:
    """The full static text of the richest prompt variant (no transcript)."""
    return load_prompt_text("general_contextual")


_ACCESSIBILITY_TEXT = {
    PromptVariant.GENERAL: "accessibility_general",
    PromptVariant.GENERAL_CONTEXTUAL: "accessibility_general",
    PromptVariant.WCAG_CONTEXTUAL: "accessibility_wcag",
}

_CONTEXTUAL_VARIANTS = {
    PromptVariant.CONTEXTUAL,
    PromptVariant.GENERAL_CONTEXTUAL,
    PromptVariant.WCAG_CONTEXTUAL,
}


def render_transcript_block(transcript: Transcript) -> str:
    """The dynamic payload appended to every prompt: the app name and the
    indexed announcements, one object per entry."""
    lines = [f"app: {json.dumps(transcript.app_name, ensure_ascii=False)},", "transcripts: ["]
    for i, entry in enumerate(transcript.entries):
        comma = "," if i < len(transcript.entries) - 1 else ""
        rendered = json.dumps(entry.transcript, ensure_ascii=False)
        lines.append(f"    {{ index: {entry.index}, transcript: {rendered} }}{comma}")
    lines.append("]")
    return "\n".join(lines)


def assemble_prompt(variant: PromptVariant | str, transcript: Transcript) -> PromptSpec:
    """Build the prompt for one screen.

    Section order is fixed per variant; the transcript section is always last.
    Raises ``EmptyTranscriptError`` when the transcript has no entries.
    """
    variant = PromptVariant(variant)
    if not transcript.entries:
        raise EmptyTranscriptError(f"screen {transcript.screen_id!r} produced no announcements")

    sections = [PromptSection("introduction", load_prompt_text("introduction"))]
    if variant in _ACCESSIBILITY_TEXT:
        sections.append(
            PromptSection("accessibility", load_prompt_text(_ACCESSIBILITY_TEXT[variant]))
        )
    instruction = "instruction_contextual" if variant in _CONTEXTUAL_VARIANTS else "instruction_basic"
    sections.append(PromptSection("instruction", load_prompt_text(instruction)))
    sections.append(PromptSection("transcript", render_transcript_block(transcript)))

    return PromptSpec(variant=variant, sections=tuple(sections), screen_id=transcript.screen_id)
