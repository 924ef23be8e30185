// Bootstrap: load report.json via the ?report= query parameter or the file
// picker, then hand off to the state/render loop.

import { Category, MalformedReportError, Report, VersionMismatchError, parseReport } from './report'
import { render, renderBanner } from './render'
import { ViewerState, initialState, select, toggleFilter } from './state'

function mount(root: HTMLElement, report: Report): void {
	let state: ViewerState = initialState(report)

	const handlers = {
		onSelect: (index: number) => {
			state = select(state, index)
			render(root, state, handlers)
		},
		onToggleFilter: (category: Category) => {
			state = toggleFilter(state, category)
			render(root, state, handlers)
		},
	}
	render(root, state, handlers)
}

function loadText(root: HTMLElement, text: string): void {
	try {
		mount(root, parseReport(text))
	} catch (err) {
		if (err instanceof VersionMismatchError) {
			renderBanner(root, 'version', err.message)
		} else if (err instanceof MalformedReportError) {
			renderBanner(root, 'malformed', err.message)
		} else {
			renderBanner(root, 'malformed', `could not load report: ${(err as Error).message}`)
		}
	}
}

function wireFilePicker(root: HTMLElement): void {
	const picker = document.getElementById('report-picker') as HTMLInputElement | null
	picker?.addEventListener('change', async () => {
		const file = picker.files?.[0]
		if (file) loadText(root, await file.text())
	})
}

async function boot(): Promise<void> {
	const root = document.getElementById('viewer')
	if (!root) return
	wireFilePicker(root)
	const param = new URLSearchParams(window.location.search).get('report')
	if (param) {
		try {
			const response = await fetch(param)
			loadText(root, await response.text())
		} catch (err) {
			renderBanner(root, 'malformed', `could not fetch ${param}: ${(err as Error).message}`)
		}
	}
}

void boot()
