// Exact rationals as reduced bigint pairs. The service speaks exact
// fractions, so coordinates must never pass through binary floats on the
// way out; screen positions get snapped onto a 1/1000 grid instead.

export interface Rat {
  readonly n: bigint
  readonly d: bigint
}

function bgcd(a: bigint, b: bigint): bigint {
  a = a < 0n ? -a : a
  b = b < 0n ? -b : b
  while (b) {
    const t = a % b
    a = b
    b = t
  }
  return a
}

export function rat(n: bigint | number, d: bigint | number = 1n): Rat {
  let nn = typeof n === 'number' ? BigInt(Math.trunc(n)) : n
  let dd = typeof d === 'number' ? BigInt(Math.trunc(d)) : d
  if (dd === 0n) throw new Error('zero denominator')
  if (dd < 0n) {
    nn = -nn
    dd = -dd
  }
  const g = bgcd(nn, dd)
  return g > 1n ? { n: nn / g, d: dd / g } : { n: nn, d: dd }
}

export const RAT_ZERO = rat(0n)

// default grid matches the advertised drag precision
export const SNAP_DENOM = 1000

export function snap(x: number, denom: number = SNAP_DENOM): Rat {
  if (!Number.isFinite(x)) throw new Error('cannot snap non-finite value')
  return rat(BigInt(Math.round(x * denom)), BigInt(denom))
}

export function ratAdd(a: Rat, b: Rat): Rat {
  return rat(a.n * b.d + b.n * a.d, a.d * b.d)
}

export function ratEq(a: Rat, b: Rat): boolean {
  return a.n === b.n && a.d === b.d
}

export function ratToNumber(a: Rat): number {
  return Number(a.n) / Number(a.d)
}

export function ratToString(a: Rat): string {
  return a.d === 1n ? a.n.toString() : `${a.n}/${a.d}`
}

export function parseRat(text: string): Rat {
  const m = /^(-?\d+)(?:\s*\/\s*(\d+))?$/.exec(text.trim())
  if (!m) throw new Error(`not a rational: ${text}`)
  return rat(BigInt(m[1]), m[2] ? BigInt(m[2]) : 1n)
}
