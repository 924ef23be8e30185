// Report document types and validation. Mirrors the report_version 1 contract
// emitted by the audit pipeline; anything else is rejected with a typed error.

export const SUPPORTED_VERSION = 1

export const CATEGORIES = [
	'missing_label',
	'label_quality',
	'structure_grouping',
	'heading',
	'functionality',
	'no_error',
] as const

export type Category = (typeof CATEGORIES)[number]

export interface Bounds {
	left: number
	top: number
	right: number
	bottom: number
}

export interface Finding {
	index: number
	transcript: string
	issue: string
	explanation: string
	suggestion: string
	source: 'rule' | 'llm'
}

export interface ReportEntry {
	index: number
	transcript: string
	node_id: string
	bounds: Bounds
	category_hint: Category | null
	findings: Finding[]
}

export interface Report {
	report_version: number
	app_name: string
	screen_id: string
	screenshot: string | null
	provenance: { prompt_variant: string; provider: string; generated_at: string }
	summary: Record<string, number>
	entries: ReportEntry[]
}

export class VersionMismatchError extends Error {
	constructor(found: unknown) {
		super(`unsupported report_version ${String(found)}; this viewer reads version ${SUPPORTED_VERSION}`)
		this.name = 'VersionMismatchError'
	}
}

export class MalformedReportError extends Error {
	constructor(detail: string) {
		super(`malformed report: ${detail}`)
		this.name = 'MalformedReportError'
	}
}

function isRecord(value: unknown): value is Record<string, unknown> {
	return typeof value === 'object' && value !== null && !Array.isArray(value)
}

function asBounds(value: unknown, where: string): Bounds {
	if (!isRecord(value)) throw new MalformedReportError(`${where}.bounds is not an object`)
	for (const key of ['left', 'top', 'right', 'bottom']) {
		if (typeof value[key] !== 'number') {
			throw new MalformedReportError(`${where}.bounds.${key} is not a number`)
		}
	}
	return value as unknown as Bounds
}

function asFinding(value: unknown, where: string): Finding {
	if (!isRecord(value)) throw new MalformedReportError(`${where} is not an object`)
	if (typeof value.index !== 'number') throw new MalformedReportError(`${where}.index missing`)
	for (const key of ['transcript', 'issue', 'explanation', 'suggestion']) {
		if (typeof value[key] !== 'string') {
			throw new MalformedReportError(`${where}.${key} is not a string`)
		}
	}
	if (value.source !== 'rule' && value.source !== 'llm') {
		throw new MalformedReportError(`${where}.source must be "rule" or "llm"`)
	}
	return value as unknown as Finding
}

function asEntry(value: unknown, i: number): ReportEntry {
	const where = `entries[${i}]`
	if (!isRecord(value)) throw new MalformedReportError(`${where} is not an object`)
	if (typeof value.index !== 'number') throw new MalformedReportError(`${where}.index missing`)
	if (typeof value.transcript !== 'string') throw new MalformedReportError(`${where}.transcript missing`)
	if (typeof value.node_id !== 'string') throw new MalformedReportError(`${where}.node_id missing`)
	const hint = value.category_hint ?? null
	if (hint !== null && !CATEGORIES.includes(hint as Category)) {
		throw new MalformedReportError(`${where}.category_hint ${String(hint)} is not a known category`)
	}
	const findings = value.findings
	if (!Array.isArray(findings)) throw new MalformedReportError(`${where}.findings is not a list`)
	return {
		index: value.index,
		transcript: value.transcript,
		node_id: value.node_id,
		bounds: asBounds(value.bounds, where),
		category_hint: hint as Category | null,
		findings: findings.map((f, j) => asFinding(f, `${where}.findings[${j}]`)),
	}
}

export function parseReport(raw: unknown): Report {
	const doc = typeof raw === 'string' ? parseJson(raw) : raw
	if (!isRecord(doc)) throw new MalformedReportError('top level is not an object')
	if (doc.report_version !== SUPPORTED_VERSION) throw new VersionMismatchError(doc.report_version)
	if (typeof doc.app_name !== 'string') throw new MalformedReportError('app_name missing')
	if (typeof doc.screen_id !== 'string') throw new MalformedReportError('screen_id missing')
	if (!Array.isArray(doc.entries)) throw new MalformedReportError('entries is not a list')
	const provenance = isRecord(doc.provenance) ? doc.provenance : {}
	const entries = doc.entries.map(asEntry)
	entries.sort((a, b) => a.index - b.index)
	return {
		report_version: SUPPORTED_VERSION,
		app_name: doc.app_name,
		screen_id: doc.screen_id,
		screenshot: typeof doc.screenshot === 'string' ? doc.screenshot : null,
		provenance: {
			prompt_variant: String(provenance.prompt_variant ?? 'unknown'),
			provider: String(provenance.provider ?? 'unknown'),
			generated_at: String(provenance.generated_at ?? ''),
		},
		summary: isRecord(doc.summary) ? (doc.summary as Record<string, number>) : {},
		entries,
	}
}

function parseJson(text: string): unknown {
	try {
		return JSON.parse(text)
	} catch (err) {
		throw new MalformedReportError(`invalid JSON (${(err as Error).message})`)
	}
}
