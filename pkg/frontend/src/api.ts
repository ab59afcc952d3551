// Thin typed client for the figure service. Every UI mutation goes through
// here; nothing in the browser touches figure mathematics directly.

import { Rat, ratToString } from './rational.js'

export interface CycleDoc {
  k: string
  l: string[]
  m: string
}

export interface RelationDoc {
  kind: string
  target?: string
  value?: string
}

export interface NodeDoc {
  key: string
  label: string
  kind: string
  generation: number
  status: string
  relations: RelationDoc[]
  instances: CycleDoc[]
  free_params: string[]
}

export interface FigureSnapshot {
  version: number
  metric: { dim: number; sigma: number; sigma_cycle: number }
  nodes: NodeDoc[]
  revision: number
}

export interface MutationResult {
  revision: number
  updated_keys?: string[]
  removed_keys?: string[]
  key?: string
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly details: Record<string, unknown> = {},
  ) {
    super(message)
  }
}

async function asApiError(res: Response): Promise<ApiError> {
  let code = `HTTP${res.status}`
  let message = res.statusText
  let details: Record<string, unknown> = {}
  try {
    const body = await res.json()
    if (body && typeof body.code === 'string') {
      code = body.code
      message = body.message ?? message
      details = body.details ?? {}
    }
  } catch {
    // non-JSON error body, keep the status line
  }
  return new ApiError(res.status, code, message, details)
}

export class Client {
  constructor(readonly base: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.base + path, init)
    if (!res.ok) throw await asApiError(res)
    return (await res.json()) as T
  }

  private post<T>(path: string, body: unknown, method = 'POST'): Promise<T> {
    return this.request<T>(path, {
      method,
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    })
  }

  getFigure(): Promise<FigureSnapshot> {
    return this.request<FigureSnapshot>('/figure')
  }

  addPoint(label: string, x: Rat, y: Rat): Promise<MutationResult> {
    return this.post('/figure/nodes', {
      label,
      point: [ratToString(x), ratToString(y)],
    })
  }

  addCycle(label: string, cycle: CycleDoc): Promise<MutationResult> {
    return this.post('/figure/nodes', { label, cycle })
  }

  addRelationNode(label: string, relations: RelationDoc[]): Promise<MutationResult> {
    return this.post('/figure/nodes', { label, relations })
  }

  movePoint(
    key: string,
    x: Rat,
    y: Rat,
    expectedRevision?: number,
  ): Promise<MutationResult> {
    const body: Record<string, unknown> = {
      point: [ratToString(x), ratToString(y)],
    }
    if (expectedRevision !== undefined) body.expected_revision = expectedRevision
    return this.post(`/figure/nodes/${key}`, body, 'PATCH')
  }

  check(k1: string, k2: string, kind: string): Promise<{ verdicts: string[]; revision: number }> {
    return this.post('/figure/check', { k1, k2, kind })
  }

  deleteNode(key: string, cascade = false): Promise<MutationResult> {
    const q = cascade ? '?cascade=true' : ''
    return this.request(`/figure/nodes/${key}${q}`, { method: 'DELETE' })
  }

  async renderSvg(query: Record<string, string>): Promise<string> {
    const qs = new URLSearchParams(query).toString()
    const res = await fetch(`${this.base}/figure/render.svg${qs ? '?' + qs : ''}`)
    if (!res.ok) throw await asApiError(res)
    return res.text()
  }
}
