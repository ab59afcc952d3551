// UI store. The browser never mutates figure state locally: every visible
// change is a service response applied to this store. Drags are throttled
// and serialized so at most one mutation is ever in flight.

import { ApiError, Client, NodeDoc, RelationDoc } from './api.js'
import { Rat, rat, ratToString, snap } from './rational.js'

export type Mode = 'add_point' | 'select'

export interface CheckEntry {
  k1: string
  k2: string
  kind: string
  verdicts: string[]
  revision: number
}

export interface ViewBox {
  xmin: number
  xmax: number
  ymin: number
  ymax: number
  widthPx: number
  heightPx: number
}

export interface Toast {
  code: string
  message: string
}

export interface UiState {
  nodes: NodeDoc[]
  revision: number
  selection: Set<string>
  params: Map<string, Rat>
  mode: Mode
  checks: CheckEntry[]
  ghost: { key: string; x: Rat; y: Rat } | null
  lastUpdatedKeys: string[]
  toast: Toast | null
  viewport: ViewBox
}

export interface StoreOptions {
  throttleMs?: number
  now?: () => number
  defer?: (fn: () => void, ms: number) => void
}

// server-side default window, mirrored so clicks land where they look
export const DEFAULT_VIEWPORT: ViewBox = {
  xmin: -4,
  xmax: 4,
  ymin: -3,
  ymax: 3,
  widthPx: 800,
  heightPx: 600,
}

const DEFAULT_PARAM = rat(1n, 2n)

export class Store {
  readonly state: UiState
  private readonly listeners = new Set<(s: UiState) => void>()
  private readonly throttleMs: number
  private readonly now: () => number
  private readonly defer: (fn: () => void, ms: number) => void

  // mutation serialization + drag throttling
  private chain: Promise<unknown> = Promise.resolve()
  private lastSendAt = -Infinity
  private pendingDrag: { key: string; x: Rat; y: Rat } | null = null
  private dragInFlight = false
  private trailerArmed = false
  private settlers: Array<() => void> = []

  constructor(readonly client: Client, opts: StoreOptions = {}) {
    this.throttleMs = opts.throttleMs ?? 50 // 20 PATCHes per second, tops
    this.now = opts.now ?? (() => Date.now())
    this.defer = opts.defer ?? ((fn, ms) => void setTimeout(fn, ms))
    this.state = {
      nodes: [],
      revision: -1,
      selection: new Set(),
      params: new Map(),
      mode: 'select',
      checks: [],
      ghost: null,
      lastUpdatedKeys: [],
      toast: null,
      viewport: { ...DEFAULT_VIEWPORT },
    }
  }

  subscribe(fn: (s: UiState) => void): () => void {
    this.listeners.add(fn)
    return () => this.listeners.delete(fn)
  }

  private emit(): void {
    for (const fn of this.listeners) fn(this.state)
  }

  private toast(err: unknown): void {
    if (err instanceof ApiError) {
      this.state.toast = { code: err.code, message: err.message }
    } else {
      this.state.toast = { code: 'NetworkError', message: String(err) }
    }
    this.emit()
  }

  clearToast(): void {
    this.state.toast = null
    this.emit()
  }

  setMode(mode: Mode): void {
    this.state.mode = mode
    this.emit()
  }

  setParam(name: string, value: Rat): void {
    this.state.params.set(name, value)
    this.emit()
  }

  paramStrings(): Record<string, string> {
    const out: Record<string, string> = {}
    for (const [name, value] of this.state.params) out[name] = ratToString(value)
    return out
  }

  /** Serialize a mutation behind every previously queued one. */
  private enqueue<T>(op: () => Promise<T>): Promise<T> {
    const next = this.chain.then(op, op)
    this.chain = next.catch(() => undefined)
    return next
  }

  private applySnapshot(nodes: NodeDoc[], revision: number): void {
    this.state.nodes = nodes
    this.state.revision = revision
    const keys = new Set(nodes.map((n) => n.key))
    for (const k of this.state.selection) if (!keys.has(k)) this.state.selection.delete(k)
    for (const n of nodes)
      for (const p of n.free_params)
        if (!this.state.params.has(p)) this.state.params.set(p, DEFAULT_PARAM)
    this.emit()
  }

  async refresh(): Promise<void> {
    const snap = await this.client.getFigure()
    this.applySnapshot(snap.nodes, snap.revision)
  }

  node(key: string): NodeDoc | undefined {
    return this.state.nodes.find((n) => n.key === key || n.label === key)
  }

  private freshLabel(prefix: string): string {
    const used = new Set(this.state.nodes.map((n) => n.label))
    let i = 0
    while (used.has(`${prefix}${i}`)) i += 1
    return `${prefix}${i}`
  }

  /** Click pathway: world coordinates get snapped onto the 1/1000 grid. */
  async addPointAt(wx: number, wy: number, label?: string): Promise<boolean> {
    const name = label ?? this.freshLabel('p')
    try {
      await this.enqueue(() => this.client.addPoint(name, snap(wx), snap(wy)))
      await this.refresh()
      return true
    } catch (err) {
      this.toast(err)
      return false
    }
  }

  async addCycleNode(label: string, cycle: { k: string; l: string[]; m: string }): Promise<boolean> {
    try {
      await this.enqueue(() => this.client.addCycle(label, cycle))
      await this.refresh()
      return true
    } catch (err) {
      this.toast(err)
      return false
    }
  }

  async submitRelationForm(label: string, relations: RelationDoc[]): Promise<boolean> {
    if (relations.length === 0) return false // form keeps submit disabled
    try {
      await this.enqueue(() => this.client.addRelationNode(label, relations))
      await this.refresh()
      return true
    } catch (err) {
      this.toast(err)
      return false
    }
  }

  async runCheck(k1: string, k2: string, kind: string): Promise<string[]> {
    const res = await this.client.check(k1, k2, kind)
    const entry: CheckEntry = { k1, k2, kind, verdicts: res.verdicts, revision: res.revision }
    const at = this.state.checks.findIndex(
      (c) => c.k1 === k1 && c.k2 === k2 && c.kind === kind,
    )
    if (at >= 0) this.state.checks[at] = entry
    else this.state.checks.push(entry)
    this.emit()
    return res.verdicts
  }

  /** Re-run every panel entry, e.g. after a drag stream settles. */
  async refreshChecks(): Promise<void> {
    for (const c of [...this.state.checks]) await this.runCheck(c.k1, c.k2, c.kind)
  }

  toggleSelection(key: string | null): void {
    if (key === null) {
      this.state.selection.clear()
    } else if (this.state.selection.has(key)) {
      this.state.selection.delete(key)
    } else {
      this.state.selection.add(key)
    }
    this.emit()
  }

  isDraggable(key: string): boolean {
    const n = this.node(key)
    return !!n && n.kind === 'point' && n.generation === 0
  }

  // ---------------------------------------------------------------- drag

  /**
   * Feed one drag sample. The ghost follows every sample immediately;
   * PATCHes go out at most one per throttle window, one in flight, and the
   * latest sample always wins (trailing send).
   */
  dragPoint(key: string, x: Rat, y: Rat): void {
    this.state.ghost = { key, x, y }
    this.pendingDrag = { key, x, y }
    this.emit()
    this.pump()
  }

  private flushSettlers(): void {
    if (this.dragInFlight || this.pendingDrag) return
    const done = this.settlers
    this.settlers = []
    for (const fn of done) fn()
  }

  private pump(): void {
    if (this.dragInFlight) return
    if (!this.pendingDrag) {
      this.flushSettlers()
      return
    }
    const wait = this.lastSendAt + this.throttleMs - this.now()
    if (wait > 0) {
      if (!this.trailerArmed) {
        this.trailerArmed = true
        this.defer(() => {
          this.trailerArmed = false
          this.pump()
        }, wait)
      }
      return
    }
    const sample = this.pendingDrag
    this.pendingDrag = null
    this.dragInFlight = true
    this.lastSendAt = this.now()
    void this.enqueue(() => this.client.movePoint(sample.key, sample.x, sample.y))
      .then((res) => {
        this.state.revision = res.revision
        this.state.lastUpdatedKeys = res.updated_keys ?? []
        this.emit()
      })
      .catch(async (err) => {
        if (err instanceof ApiError && err.status === 409) {
          // stale revision or a concurrent writer: resync, keep dragging
          await this.refresh().catch(() => undefined)
        } else {
          this.pendingDrag = null
          this.toast(err)
        }
      })
      .then(async () => {
        this.dragInFlight = false
        if (this.pendingDrag) {
          this.pump()
        } else {
          this.state.ghost = null
          await this.refresh().catch(() => undefined)
          await this.refreshChecks().catch(() => undefined)
          this.emit()
          this.flushSettlers()
        }
      })
  }

  /** Resolves once no drag PATCH is pending or in flight. */
  settled(): Promise<void> {
    if (!this.dragInFlight && !this.pendingDrag) return Promise.resolve()
    return new Promise((resolve) => this.settlers.push(resolve))
  }
}
