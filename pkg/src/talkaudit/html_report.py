"""Static, self-contained HTML rendering of a report.

The document needs no network access and no script: highlight boxes are
absolutely positioned over the screenshot from entry bounds, and per-entry
details use native disclosure elements so the page stays keyboard operable.
Output is deterministic for a given report; the provenance timestamp is
deliberately left out of the body.
"""

from __future__ import annotations

import html

from .report import Report, ReportEntry

_STYLE = """
body { font-family: system-ui, sans-serif; margin: 1.5rem; color: #1a1a1a; }
header h1 { margin-bottom: 0.2rem; }
.meta { color: #555; margin-bottom: 1rem; }
.layout { display: flex; gap: 2rem; align-items: flex-start; flex-wrap: wrap; }
.screen { position: relative; flex: 0 0 auto; border: 1px solid #ccc; background: #fafafa; }
.screen img { display: block; max-width: 100%; }
.hl { position: absolute; border: 2px solid #c62828; background: rgba(198, 40, 40, 0.12); }
.hl a { display: block; width: 100%; height: 100%; }
.entries { flex: 1 1 24rem; min-width: 20rem; }
.entries li { margin-bottom: 0.4rem; }
.transcript-text { font-style: italic; }
.finding { border-left: 3px solid #c62828; padding-left: 0.6rem; margin: 0.5rem 0; }
.finding .source { font-size: 0.8rem; color: #555; text-transform: uppercase; }
.no-issues { padding: 0.6rem; background: #e8f5e9; border: 1px solid #a5d6a7; }
summary { cursor: pointer; }
"""


def _scale(report: Report) -> tuple[int, int]:
    width = max((entry.bounds.right for entry in report.entries), default=0)
    height = max((entry.bounds.bottom for entry in report.entries), default=0)
    return max(width, 1), max(height, 1)


def _tooltip(entry: ReportEntry) -> str:
    first_issue = entry.findings[0].issue if entry.findings else ""
    return f"{entry.transcript} — {first_issue}" if first_issue else entry.transcript


def _highlight_boxes(report: Report) -> list[str]:
    width, height = _scale(report)
    boxes = []
    for entry in report.entries:
        if not entry.findings:
            continue
        b = entry.bounds
        style = (
            f"left:{b.left / width * 100:.2f}%;top:{b.top / height * 100:.2f}%;"
            f"width:{b.width / width * 100:.2f}%;height:{b.height / height * 100:.2f}%"
        )
        title = html.escape(_tooltip(entry), quote=True)
        boxes.append(
            f'<div class="hl" style="{style}">'
            f'<a href="#entry-{entry.index}" title="{title}" '
            f'aria-label="Entry {entry.index}: {title}"></a></div>'
        )
    return boxes


def _entry_html(entry: ReportEntry) -> str:
    transcript = html.escape(entry.transcript)
    if not entry.findings:
        return (
            f'<li id="entry-{entry.index}">'
            f"<strong>{entry.index}</strong> "
            f'<span class="transcript-text">{transcript}</span></li>'
        )
    findings = []
    for finding in entry.findings:
        parts = [f'<p class="source">{html.escape(finding.source.value)}</p>']
        parts.append(f"<p><strong>{html.escape(finding.issue)}</strong></p>")
        if finding.explanation:
            parts.append(f"<p>{html.escape(finding.explanation)}</p>")
        if finding.suggestion:
            parts.append(f"<p>Suggested action: {html.escape(finding.suggestion)}</p>")
        findings.append('<div class="finding">' + "".join(parts) + "</div>")
    count = len(entry.findings)
    noun = "issue" if count == 1 else "issues"
    return (
        f'<li id="entry-{entry.index}"><details>'
        f"<summary><strong>{entry.index}</strong> "
        f'<span class="transcript-text">{transcript}</span> ({count} {noun})</summary>'
        + "".join(findings)
        + "</details></li>"
    )


def emit_html(report: Report) -> str:
    total_findings = sum(len(entry.findings) for entry in report.entries)
    width, height = _scale(report)

    screen_parts = []
    if report.screenshot:
        screen_parts.append(
            f'<img src="{html.escape(report.screenshot, quote=True)}" '
            f'alt="Screenshot of {html.escape(report.app_name, quote=True)}">'
        )
    screen_parts.extend(_highlight_boxes(report))
    aspect = f"width:24rem;aspect-ratio:{width}/{height}"

    summary_bits = ", ".join(
        f"{html.escape(key)}: {count}" for key, count in sorted(report.summary.items())
    )
    if total_findings == 0:
        status = '<p class="no-issues">No accessibility issues were detected on this screen.</p>'
    else:
        status = f"<p>{total_findings} finding(s) across {len(report.summary)} categories ({summary_bits}).</p>"

    entries_html = "\n".join(_entry_html(entry) for entry in report.entries)

    return f"""<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>Accessibility report: {html.escape(report.app_name)} — {html.escape(report.screen_id)}</title>
<style>{_STYLE}</style>
</head>
<body>
<header>
<h1>Accessibility report: {html.escape(report.app_name)}</h1>
<p class="meta">Screen {html.escape(report.screen_id)} · prompt {html.escape(report.provenance.prompt_variant)} · provider {html.escape(report.provenance.provider)}</p>
{status}
</header>
<div class="layout">
<div class="screen" style="{aspect}">
{''.join(screen_parts)}
</div>
<div class="entries">
<h2>Announcements</h2>
<ol start="0">
{entries_html}
</ol>
</div>
</div>
</body>
</html>
"""
