import type { OpRecord, RelationSymbol } from "./types.js";

/**
 * Operations whose preconditions hold for one cell, given its current
 * symbol. This mirrors the service's rules purely for menu filtering;
 * the service remains the authority and still validates every edit.
 */
export function opsForCell(row: string, col: string, symbol: RelationSymbol): OpRecord[] {
  const ops: OpRecord[] = [];
  if (row === col) {
    if (symbol === "-") {
      ops.push({ op: "exclusive_to_direct", a: row, b: col });
    }
    if (symbol === "||") {
      ops.push({ op: "direct_to_eventual", a: row, b: col });
    }
    ops.push({ op: "remove_activity", a: row });
    return ops;
  }
  if (symbol === "-" || symbol === "<-") {
    ops.push({ op: "exclusive_to_direct", a: row, b: col });
  }
  if (symbol === "->" || symbol === "||") {
    ops.push({ op: "direct_to_eventual", a: row, b: col });
  }
  if (symbol !== "<>") {
    ops.push({ op: "decouple", a: row, b: col });
  }
  return ops;
}
