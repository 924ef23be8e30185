// DOM rendering. The whole view re-renders from state on every transition;
// the report itself is immutable after load. All interactive pieces are
// native buttons and checkboxes so the viewer is operable by keyboard alone.

import { CATEGORIES, Category, ReportEntry } from './report'
import {
	ViewerState,
	allFiltersActive,
	overlayEntries,
	tooltip,
	visibleEntries,
} from './state'

export interface Handlers {
	onSelect: (index: number) => void
	onToggleFilter: (category: Category) => void
}

const CATEGORY_LABELS: Record<Category, string> = {
	missing_label: 'Missing label',
	label_quality: 'Label quality',
	structure_grouping: 'Structure & grouping',
	heading: 'Heading',
	functionality: 'Functionality',
	no_error: 'No error',
}

export function renderBanner(root: HTMLElement, kind: 'version' | 'malformed', message: string): void {
	root.textContent = ''
	const banner = document.createElement('div')
	banner.className = `banner banner-${kind}`
	banner.setAttribute('role', 'alert')
	banner.textContent = message
	root.append(banner)
}

function renderHeader(state: ViewerState): HTMLElement {
	const header = document.createElement('header')
	const title = document.createElement('h1')
	title.textContent = `${state.report.app_name} — ${state.report.screen_id}`
	const meta = document.createElement('p')
	meta.className = 'meta'
	const flagged = state.report.entries.filter((e) => e.findings.length > 0).length
	meta.textContent =
		`${state.report.entries.length} announcements, ${flagged} with findings · ` +
		`prompt ${state.report.provenance.prompt_variant} · provider ${state.report.provenance.provider}`
	header.append(title, meta)
	return header
}

function renderFilterBar(state: ViewerState, handlers: Handlers): HTMLElement {
	const bar = document.createElement('fieldset')
	bar.className = 'filters'
	const legend = document.createElement('legend')
	legend.textContent = 'Issue Filter'
	bar.append(legend)
	for (const category of CATEGORIES) {
		const label = document.createElement('label')
		const box = document.createElement('input')
		box.type = 'checkbox'
		box.checked = state.filters.has(category)
		box.dataset.focusId = `filter-${category}`
		box.addEventListener('change', () => handlers.onToggleFilter(category))
		label.append(box, document.createTextNode(` ${CATEGORY_LABELS[category]}`))
		bar.append(label)
	}
	return bar
}

function canvasSize(entries: ReportEntry[]): { width: number; height: number } {
	let width = 1
	let height = 1
	for (const entry of entries) {
		width = Math.max(width, entry.bounds.right)
		height = Math.max(height, entry.bounds.bottom)
	}
	return { width, height }
}

function renderScreenPane(state: ViewerState, handlers: Handlers): HTMLElement {
	const pane = document.createElement('div')
	pane.className = 'screen'
	const { width, height } = canvasSize(state.report.entries)
	pane.style.aspectRatio = `${width} / ${height}`
	if (state.report.screenshot) {
		const img = document.createElement('img')
		img.src = state.report.screenshot
		img.alt = `Screenshot of ${state.report.app_name}`
		pane.append(img)
	}
	for (const entry of overlayEntries(state)) {
		const overlay = document.createElement('button')
		overlay.type = 'button'
		overlay.className = 'hl'
		if (state.selected === entry.index) overlay.classList.add('active')
		const b = entry.bounds
		overlay.style.left = `${((b.left / width) * 100).toFixed(2)}%`
		overlay.style.top = `${((b.top / height) * 100).toFixed(2)}%`
		overlay.style.width = `${(((b.right - b.left) / width) * 100).toFixed(2)}%`
		overlay.style.height = `${(((b.bottom - b.top) / height) * 100).toFixed(2)}%`
		overlay.title = tooltip(entry)
		overlay.setAttribute('aria-label', `Entry ${entry.index}: ${tooltip(entry)}`)
		overlay.dataset.entry = String(entry.index)
		overlay.dataset.focusId = `overlay-${entry.index}`
		overlay.addEventListener('click', () => handlers.onSelect(entry.index))
		pane.append(overlay)
	}
	return pane
}

function renderFinding(finding: ReportEntry['findings'][number]): HTMLElement {
	const block = document.createElement('div')
	block.className = 'finding'
	const source = document.createElement('p')
	source.className = 'source'
	source.textContent = finding.source
	const issue = document.createElement('p')
	issue.className = 'issue'
	issue.textContent = finding.issue
	block.append(source, issue)
	if (finding.explanation) {
		const explanation = document.createElement('p')
		explanation.textContent = finding.explanation
		block.append(explanation)
	}
	if (finding.suggestion) {
		const suggestion = document.createElement('p')
		suggestion.textContent = `Suggested action: ${finding.suggestion}`
		block.append(suggestion)
	}
	return block
}

function renderRow(state: ViewerState, entry: ReportEntry, handlers: Handlers): HTMLElement {
	const row = document.createElement('li')
	row.dataset.entry = String(entry.index)
	if (state.selected === entry.index) row.classList.add('selected')

	const head = document.createElement('button')
	head.type = 'button'
	head.className = 'row-head'
	const expanded = state.expanded.has(entry.index)
	head.setAttribute('aria-expanded', String(expanded))
	head.title = tooltip(entry)
	head.dataset.focusId = `row-${entry.index}`
	head.addEventListener('click', () => handlers.onSelect(entry.index))

	const indexBadge = document.createElement('span')
	indexBadge.className = 'index'
	indexBadge.textContent = String(entry.index)
	const transcript = document.createElement('span')
	transcript.className = 'transcript'
	transcript.textContent = entry.transcript
	head.append(indexBadge, transcript)
	if (entry.findings.length > 0) {
		const badge = document.createElement('span')
		badge.className = 'count'
		const noun = entry.findings.length === 1 ? 'issue' : 'issues'
		badge.textContent = `${entry.findings.length} ${noun}`
		head.append(badge)
	}
	row.append(head)

	const details = document.createElement('div')
	details.className = 'row-details'
	details.hidden = !expanded
	if (entry.findings.length === 0) {
		const none = document.createElement('p')
		none.textContent = 'No issues detected for this announcement.'
		details.append(none)
	} else {
		for (const finding of entry.findings) details.append(renderFinding(finding))
	}
	row.append(details)
	return row
}

function renderListPane(state: ViewerState, handlers: Handlers): HTMLElement {
	const pane = document.createElement('div')
	pane.className = 'entries'
	const heading = document.createElement('h2')
	heading.textContent = 'Announcements'
	pane.append(heading)

	if (state.report.entries.length === 0) {
		const empty = document.createElement('p')
		empty.className = 'empty-state'
		empty.textContent = 'This report contains no announcements.'
		pane.append(empty)
		return pane
	}

	const rows = visibleEntries(state)
	if (rows.length === 0) {
		const hint = document.createElement('p')
		hint.className = 'filter-hint'
		hint.textContent = 'No entries match the active filters. Re-enable filters to see the list.'
		pane.append(hint)
		return pane
	}
	if (!allFiltersActive(state)) {
		const note = document.createElement('p')
		note.className = 'filter-note'
		note.textContent = `Showing ${rows.length} of ${state.report.entries.length} entries.`
		pane.append(note)
	}
	const list = document.createElement('ol')
	for (const entry of rows) list.append(renderRow(state, entry, handlers))
	pane.append(list)
	return pane
}

export function render(root: HTMLElement, state: ViewerState, handlers: Handlers): void {
	const focused = document.activeElement as HTMLElement | null
	const focusId = focused?.dataset?.focusId
	root.textContent = ''
	root.append(renderHeader(state))
	root.append(renderFilterBar(state, handlers))
	const layout = document.createElement('div')
	layout.className = 'layout'
	layout.append(renderScreenPane(state, handlers), renderListPane(state, handlers))
	root.append(layout)
	if (focusId) {
		const target = root.querySelector<HTMLElement>(`[data-focus-id="${focusId}"]`)
		target?.focus()
	}
}
