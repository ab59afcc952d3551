// Rendering. The canvas is the server's own SVG document injected verbatim,
// so what the user sees is exactly what GET /figure/render.svg returns for
// the current revision and parameter assignment; the UI only adds overlays
// (ghost point, selection chrome) on top.

import { Client, NodeDoc } from './api.js'
import { ratToNumber } from './rational.js'
import { CheckEntry, Store, UiState, ViewBox } from './state.js'

export function screenToWorld(vp: ViewBox, px: number, py: number): { x: number; y: number } {
  return {
    x: vp.xmin + (px / vp.widthPx) * (vp.xmax - vp.xmin),
    y: vp.ymax - (py / vp.heightPx) * (vp.ymax - vp.ymin),
  }
}

export function worldToScreen(vp: ViewBox, wx: number, wy: number): { x: number; y: number } {
  return {
    x: ((wx - vp.xmin) / (vp.xmax - vp.xmin)) * vp.widthPx,
    y: ((vp.ymax - wy) / (vp.ymax - vp.ymin)) * vp.heightPx,
  }
}

function parseExact(text: string): number | null {
  const m = /^(-?\d+)(?:\/(\d+))?$/.exec(text)
  if (!m) return null // symbolic coefficient, not hit-testable
  return Number(m[1]) / (m[2] ? Number(m[2]) : 1)
}

/**
 * Distance from a world point to a numeric instance's locus. Instances with
 * symbolic coefficients return null and are skipped by hit tests.
 */
export function instanceDistance(
  inst: { k: string; l: string[]; m: string },
  wx: number,
  wy: number,
): number | null {
  const k = parseExact(inst.k)
  const lx = parseExact(inst.l[0])
  const ly = parseExact(inst.l[1])
  const m = parseExact(inst.m)
  if (k === null || lx === null || ly === null || m === null) return null
  if (k === 0) {
    const norm = 2 * Math.hypot(lx, ly)
    if (norm === 0) return null
    return Math.abs(-2 * lx * wx - 2 * ly * wy + m) / norm
  }
  const cx = lx / k
  const cy = ly / k
  const r2 = (lx * lx + ly * ly - k * m) / (k * k)
  const dc = Math.hypot(wx - cx, wy - cy)
  if (r2 <= 0) return dc // point cycle (or imaginary: treat as its center)
  return Math.abs(dc - Math.sqrt(r2))
}

/** Nearest selectable node within tolerance, or null. */
export function hitTest(
  nodes: NodeDoc[],
  wx: number,
  wy: number,
  tolWorld: number,
): string | null {
  let bestKey: string | null = null
  let bestDist = tolWorld
  for (const n of nodes) {
    if (n.generation < 0) continue // reserved nodes are not selectable
    for (const inst of n.instances) {
      const d = instanceDistance(inst, wx, wy)
      if (d !== null && d <= bestDist) {
        bestDist = d
        bestKey = n.key
      }
    }
  }
  return bestKey
}

export function verdictLine(c: CheckEntry, i: number): string {
  return `${c.k1} and ${c.k2} are ${c.kind}: ${c.verdicts[i]}`
}

export function renderPanel(el: HTMLElement, checks: CheckEntry[]): void {
  el.textContent = ''
  for (const c of checks) {
    for (let i = 0; i < c.verdicts.length; i++) {
      const line = el.ownerDocument.createElement('div')
      line.className = `verdict verdict-${c.verdicts[i].toLowerCase()}`
      line.textContent = verdictLine(c, i)
      el.appendChild(line)
    }
  }
}

export function renderChips(el: HTMLElement, state: UiState): void {
  el.textContent = ''
  for (const n of state.nodes) {
    if (n.generation < 0) continue
    const chip = el.ownerDocument.createElement('span')
    chip.className = 'chip' + (state.selection.has(n.key) ? ' selected' : '')
    chip.dataset.key = n.key
    chip.textContent = `${n.label} ×${n.instances.length}`
    if (n.status !== 'Solved') chip.textContent += ` (${n.status})`
    el.appendChild(chip)
  }
}

export function renderSliders(el: HTMLElement, state: UiState, store: Store): void {
  el.textContent = ''
  for (const [name, value] of state.params) {
    const row = el.ownerDocument.createElement('label')
    row.className = 'param'
    row.textContent = name + ' '
    const slider = el.ownerDocument.createElement('input')
    slider.type = 'range'
    slider.min = '-10'
    slider.max = '10'
    slider.step = '0.001' // sliders snap to the same 1/1000 grid as drags
    slider.value = String(ratToNumber(value))
    slider.dataset.param = name
    row.appendChild(slider)
    el.appendChild(row)
  }
  void store // wiring of input events lives in main; kept pure here
}

export function showToast(container: HTMLElement, code: string, message: string): void {
  const t = container.ownerDocument.createElement('div')
  t.className = 'toast'
  t.textContent = `${code}: ${message}`
  container.appendChild(t)
}

export class Canvas {
  /** Revision the current drawing was fetched under, -1 before first load. */
  revision = -1
  private svgText = ''

  constructor(
    readonly root: HTMLElement,
    readonly client: Client,
    readonly store: Store,
  ) {}

  viewportQuery(): Record<string, string> {
    const vp = this.store.state.viewport
    return {
      xmin: String(vp.xmin),
      xmax: String(vp.xmax),
      ymin: String(vp.ymin),
      ymax: String(vp.ymax),
      width: String(vp.widthPx),
      height: String(vp.heightPx),
    }
  }

  /** Fetch the server drawing for the current revision and params. */
  async redraw(): Promise<void> {
    const revisionAtFetch = this.store.state.revision
    const svg = await this.client.renderSvg({
      ...this.viewportQuery(),
      ...this.store.paramStrings(),
    })
    this.root.innerHTML = svg
    this.svgText = svg
    this.revision = revisionAtFetch
    this.root.dataset.revision = String(revisionAtFetch)
  }

  /** Exact bytes the canvas is currently displaying. */
  snapshot(): string {
    return this.svgText
  }

  /** Screen-space ghost marker while a drag PATCH is in flight. */
  drawGhost(ghostLayer: HTMLElement): void {
    ghostLayer.textContent = ''
    const ghost = this.store.state.ghost
    if (!ghost) return
    const vp = this.store.state.viewport
    const at = worldToScreen(vp, ratToNumber(ghost.x), ratToNumber(ghost.y))
    const dot = ghostLayer.ownerDocument.createElement('div')
    dot.className = 'ghost'
    dot.style.left = `${at.x}px`
    dot.style.top = `${at.y}px`
    ghostLayer.appendChild(dot)
  }
}
