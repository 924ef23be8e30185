// Viewer state and its transitions, kept pure so they can be tested without a DOM.
//
// Visibility rule: an entry with a category hint is visible while its category
// filter is on; entries without a hint (including unflagged ones) are visible
// only while every filter is on, so narrowing the filter shows just the
// matching flagged rows. List order always equals entry index order.

import { CATEGORIES, Category, Report, ReportEntry } from './report'

export interface ViewerState {
	report: Report
	selected: number | null
	filters: Set<Category>
	expanded: Set<number>
}

export function initialState(report: Report): ViewerState {
	return {
		report,
		selected: null,
		filters: new Set<Category>(CATEGORIES),
		expanded: new Set<number>(),
	}
}

export function allFiltersActive(state: ViewerState): boolean {
	return state.filters.size === CATEGORIES.length
}

export function isVisible(state: ViewerState, entry: ReportEntry): boolean {
	if (entry.category_hint === null) return allFiltersActive(state)
	return state.filters.has(entry.category_hint)
}

/** Entries to list, always in index order regardless of filter history. */
export function visibleEntries(state: ViewerState): ReportEntry[] {
	return state.report.entries.filter((entry) => isVisible(state, entry))
}

/** Entries that get a screenshot overlay: visible and carrying findings. */
export function overlayEntries(state: ViewerState): ReportEntry[] {
	return visibleEntries(state).filter((entry) => entry.findings.length > 0)
}

/**
 * Select an entry (from the overlay or the list row): expands it and moves the
 * highlight; selecting the already-selected entry collapses it. Other
 * expansions are left alone so several rows can be open at once.
 */
export function select(state: ViewerState, index: number): ViewerState {
	const entry = state.report.entries.find((e) => e.index === index)
	if (!entry || !isVisible(state, entry)) return state
	const expanded = new Set(state.expanded)
	if (state.selected === index && expanded.has(index)) {
		expanded.delete(index)
		return { ...state, selected: null, expanded }
	}
	expanded.add(index)
	return { ...state, selected: index, expanded }
}

/** Replace the active category filters; a filtered-out selection is cleared. */
export function setFilters(state: ViewerState, filters: Iterable<Category>): ViewerState {
	const next: ViewerState = { ...state, filters: new Set(filters) }
	if (next.selected !== null) {
		const entry = state.report.entries.find((e) => e.index === next.selected)
		if (!entry || !isVisible(next, entry)) next.selected = null
	}
	return next
}

export function toggleFilter(state: ViewerState, category: Category): ViewerState {
	const filters = new Set(state.filters)
	if (filters.has(category)) filters.delete(category)
	else filters.add(category)
	return setFilters(state, filters)
}

export function tooltip(entry: ReportEntry): string {
	const firstIssue = entry.findings.find((f) => f.issue !== '')?.issue
	return firstIssue ? `${entry.transcript} — ${firstIssue}` : entry.transcript
}
