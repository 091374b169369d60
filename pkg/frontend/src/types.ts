/** Wire types of the backend /api/ surface. */

export interface PositionLabel {
  caption: string;
  unique_name: string;
}

export interface CellSetWire {
  axes: { positions: PositionLabel[][] }[];
  cells: Record<string, number | null>[];
  measures: string[];
}

export interface CubeSummary {
  name: string;
  measures: string[];
  roles: { role: string; dimension: string }[];
}

export interface LevelMeta {
  name: string;
  member_count: number;
}

export interface HierarchyMeta {
  name: string;
  levels: LevelMeta[];
}

export interface DimensionMeta {
  role: string;
  dimension: string;
  hierarchies: HierarchyMeta[];
}

export interface CubeMetadata {
  name: string;
  fact: string;
  measures: { name: string; aggregator: string; kind: string }[];
  dimensions: DimensionMeta[];
  stats: Record<string, unknown>;
}

export interface MemberWire {
  caption: string;
  unique_name: string;
  key: string | null;
  level: string;
  level_index: number;
  ordinal: number;
  has_children: boolean;
}

export interface MembersPage {
  total: number;
  offset: number;
  members: MemberWire[];
}

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
  position?: { line: number; column: number };
}
