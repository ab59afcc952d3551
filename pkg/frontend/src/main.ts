// Browser entry point: builds the page skeleton, wires events to the store,
// and keeps the panels in sync with store updates.

import { Client, RelationDoc } from './api.js'
import { parseRat, snap } from './rational.js'
import { Store } from './state.js'
import {
  Canvas,
  hitTest,
  renderChips,
  renderPanel,
  renderSliders,
  screenToWorld,
  showToast,
} from './view.js'

const SELECT_TOLERANCE_PX = 8

export function parseRelationForm(text: string): RelationDoc[] {
  // one relation per line: "tangent a", "passes_infinity",
  // "steiner_power 3 a", "angle_cos_sq 1/2 R"
  const out: RelationDoc[] = []
  for (const raw of text.split('\n')) {
    const line = raw.trim()
    if (!line) continue
    const bits = line.split(/\s+/)
    const rel: RelationDoc = { kind: bits[0] }
    if (bits.length === 2) rel.target = bits[1]
    if (bits.length === 3) {
      rel.value = bits[1]
      rel.target = bits[2]
    }
    out.push(rel)
  }
  return out
}

export function bootstrap(doc: Document, serviceBase: string): {
  store: Store
  canvas: Canvas
} {
  const client = new Client(serviceBase)
  const store = new Store(client)

  const app = doc.getElementById('app') ?? doc.body
  app.innerHTML = `
    <div class="toolbar">
      <button id="mode-add">add point</button>
      <button id="mode-select">select</button>
      <form id="relation-form">
        <input id="rel-label" placeholder="label">
        <textarea id="rel-lines" placeholder="tangent a"></textarea>
        <button id="rel-submit" type="submit" disabled>add node</button>
      </form>
      <form id="check-form">
        <input id="check-k1" placeholder="first">
        <input id="check-k2" placeholder="second">
        <input id="check-kind" value="orthogonal">
        <button type="submit">check</button>
      </form>
    </div>
    <div class="stage">
      <div id="canvas"></div>
      <div id="ghost-layer"></div>
    </div>
    <div id="chips"></div>
    <div id="sliders"></div>
    <div id="panel"></div>
    <div id="toasts"></div>
  `

  const canvasEl = doc.getElementById('canvas') as HTMLElement
  const ghostLayer = doc.getElementById('ghost-layer') as HTMLElement
  const panel = doc.getElementById('panel') as HTMLElement
  const chips = doc.getElementById('chips') as HTMLElement
  const sliders = doc.getElementById('sliders') as HTMLElement
  const toasts = doc.getElementById('toasts') as HTMLElement
  const canvas = new Canvas(canvasEl, client, store)

  doc.getElementById('mode-add')!.addEventListener('click', () => store.setMode('add_point'))
  doc.getElementById('mode-select')!.addEventListener('click', () => store.setMode('select'))

  // relation form: submit stays disabled while the relation list is empty
  const relLines = doc.getElementById('rel-lines') as HTMLTextAreaElement
  const relLabel = doc.getElementById('rel-label') as HTMLInputElement
  const relSubmit = doc.getElementById('rel-submit') as HTMLButtonElement
  relLines.addEventListener('input', () => {
    relSubmit.disabled = parseRelationForm(relLines.value).length === 0
  })
  doc.getElementById('relation-form')!.addEventListener('submit', (ev) => {
    ev.preventDefault()
    const relations = parseRelationForm(relLines.value)
    if (relations.length === 0) return
    void store.submitRelationForm(relLabel.value, relations)
  })

  doc.getElementById('check-form')!.addEventListener('submit', (ev) => {
    ev.preventDefault()
    const k1 = (doc.getElementById('check-k1') as HTMLInputElement).value
    const k2 = (doc.getElementById('check-k2') as HTMLInputElement).value
    const kind = (doc.getElementById('check-kind') as HTMLInputElement).value
    store.runCheck(k1, k2, kind).catch((err) => showToast(toasts, 'CheckFailed', String(err)))
  })

  sliders.addEventListener('input', (ev) => {
    const slider = ev.target as HTMLInputElement
    const name = slider.dataset.param
    if (name) store.setParam(name, snap(Number(slider.value)))
  })

  // canvas interactions
  let dragKey: string | null = null
  canvasEl.addEventListener('pointerdown', (ev: PointerEvent) => {
    const rect = canvasEl.getBoundingClientRect()
    const w = screenToWorld(store.state.viewport, ev.clientX - rect.left, ev.clientY - rect.top)
    const vp = store.state.viewport
    const tolWorld = (SELECT_TOLERANCE_PX / vp.widthPx) * (vp.xmax - vp.xmin)
    const hit = hitTest(store.state.nodes, w.x, w.y, tolWorld)
    if (store.state.mode === 'add_point') {
      if (hit === null) void store.addPointAt(w.x, w.y)
      return
    }
    if (hit !== null && store.isDraggable(hit)) {
      dragKey = hit
      canvasEl.style.cursor = 'grabbing'
    } else if (hit !== null) {
      store.toggleSelection(hit)
      canvasEl.style.cursor = 'not-allowed' // non-roots cannot be dragged
    } else {
      store.toggleSelection(null)
    }
  })
  canvasEl.addEventListener('pointermove', (ev: PointerEvent) => {
    if (!dragKey) return
    const rect = canvasEl.getBoundingClientRect()
    const w = screenToWorld(store.state.viewport, ev.clientX - rect.left, ev.clientY - rect.top)
    store.dragPoint(dragKey, snap(w.x), snap(w.y))
  })
  const endDrag = () => {
    dragKey = null
    canvasEl.style.cursor = ''
  }
  canvasEl.addEventListener('pointerup', endDrag)
  canvasEl.addEventListener('pointerleave', endDrag)

  // store-driven re-render
  store.subscribe((state) => {
    renderPanel(panel, state.checks)
    renderChips(chips, state)
    renderSliders(sliders, state, store)
    canvas.drawGhost(ghostLayer)
    if (state.toast) {
      showToast(toasts, state.toast.code, state.toast.message)
      store.clearToast()
    }
  })

  // the canvas refetches after any revision change settles
  let drawnRevision = -1
  store.subscribe((state) => {
    if (state.ghost === null && state.revision !== drawnRevision) {
      drawnRevision = state.revision
      canvas.redraw().catch(() => {
        drawnRevision = -1 // missing params etc: retry on next change
      })
    }
  })

  void store
    .refresh()
    .then(() => canvas.redraw())
    .catch(() => undefined) // service not up yet: panels stay empty
  return { store, canvas }
}

declare const window: { document?: Document; location?: { origin: string } } | undefined

// browser auto-start; tests import bootstrap() explicitly instead
if (typeof window !== 'undefined' && window?.document?.getElementById('app')) {
  bootstrap(window.document, window.location?.origin ?? 'http://127.0.0.1:8080')
}

export { parseRat }
