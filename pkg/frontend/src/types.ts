export type RelationSymbol = "->" | "<-" | "||" | "-" | "<" | ">" | "<>";

export interface MatrixPayload {
  activities: string[];
  cells: RelationSymbol[][];
}

export interface DiffEntry {
  row: string;
  col: string;
  old: RelationSymbol;
  new: RelationSymbol;
}

export type OpRecord =
  | { op: "remove_activity"; a: string }
  | { op: "decouple"; a: string; b: string }
  | { op: "exclusive_to_direct"; a: string; b: string }
  | { op: "direct_to_eventual"; a: string; b: string };

export interface OpResponse {
  matrix: MatrixPayload;
  diff: DiffEntry[];
}

export interface ConstraintRecord {
  template: "Init" | "ChainResponse" | "AlternateResponse";
  source?: string[];
  target: string[];
}

export interface ConstraintSummary {
  constraint: string;
  violated_traces: number;
}

export interface CheckReport {
  conformance_rate: number;
  total_traces: number;
  conforming_traces: number;
  constraints: ConstraintSummary[];
  traces: {
    case_id: string;
    conforms: boolean;
    violations: { constraint: string; positions: number[] }[];
  }[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail?: string | null;
}

/** Display glyphs for the wire symbols. */
export const SYMBOL_GLYPH: Record<RelationSymbol, string> = {
  "->": "→",
  "<-": "←",
  "||": "∥",
  "-": "−",
  "<": "≺",
  ">": "≻",
  "<>": "≺≻",
};

export const OP_LABEL: Record<OpRecord["op"], string> = {
  remove_activity: "Remove activity (make optional)",
  decouple: "Decouple pair",
  exclusive_to_direct: "Exclusive → direct",
  direct_to_eventual: "Direct → eventual",
};
