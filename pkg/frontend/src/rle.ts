/** Row-major run-length coding of integer fields, as the service sends them. */

export function decodeRle(
  runs: Array<[number, number]>,
  expectedLength: number
): Int32Array {
  const out = new Int32Array(expectedLength);
  let pos = 0;
  for (const [value, run] of runs) {
    if (run <= 0) throw new Error(`non-positive run length ${run}`);
    if (pos + run > expectedLength) {
      throw new Error(`runs overflow the expected length ${expectedLength}`);
    }
    out.fill(value, pos, pos + run);
    pos += run;
  }
  if (pos !== expectedLength) {
    throw new Error(`runs cover ${pos} of ${expectedLength} entries`);
  }
  return out;
}

export function encodeRle(values: ArrayLike<number>): Array<[number, number]> {
  const out: Array<[number, number]> = [];
  if (values.length === 0) return out;
  let current = values[0];
  let run = 1;
  for (let i = 1; i < values.length; i++) {
    if (values[i] === current) {
      run += 1;
    } else {
      out.push([current, run]);
      current = values[i];
      run = 1;
    }
  }
  out.push([current, run]);
  return out;
}
