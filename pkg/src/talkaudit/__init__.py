"""Offline screen reader audit toolkit.

Pipeline stages: capture parsing -> transcript synthesis -> rule checks and
model-based auditing -> unified reports -> evaluation against ground truth.
"""

from .audit import AuditFinding, AuditResult, FindingSource, audit_screen, parse_audit
from .capture import ScreenCapture, ViewNode, parse_capture, serialize_capture, validate_corpus
from .evaluate import EvaluationMetrics, f1_score, match_findings, score
from .geometry import BoundingBox, iou
from .prompts import PromptSpec, PromptVariant, assemble_prompt
from .providers import MockProvider, ProviderConfig, submit
from .report import Report, build_report, emit_json, parse_report
from .rules import RuleFinding, run_all_rules
from .taxonomy import ErrorCategory, GroundTruthLabel, Verdict
from .transcript import Transcript, TranscriptEntry, associate, compose_announcement, focus_order, synthesize

__version__ = "0.1.0"
