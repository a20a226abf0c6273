// Wire-format types mirroring the engine's canonical JSON documents.

export type Family =
  | 'chart' | 'bigNumber' | 'text' | 'image' | 'filterWidget' | 'container';

export type ChartSubtype =
  | 'bar' | 'line' | 'area' | 'scatter' | 'pie' | 'table' | 'map' | 'other';

export type BundleName = 'Color' | 'Lines' | 'Text' | 'Layout' | 'Style' | 'All';

export const BUNDLE_NAMES: BundleName[] =
  ['Color', 'Lines', 'Text', 'Layout', 'Style', 'All'];

export interface ComponentKind {
  family: Family;
  chartSubtype?: ChartSubtype;
}

export interface BBox {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface ProvenanceRecord {
  attributeKey: string;
  referenceId: string;
  sourceComponentId?: string;
  bundle: BundleName;
  timestamp: string;
}

export interface DashComponent {
  id: string;
  kind: ComponentKind;
  bbox: BBox;
  style: Record<string, string | number | boolean>;
  dataBinding?: string;
  placeholder: boolean;
  locks: string[];
  provenance: ProvenanceRecord[];
  renderSpec?: Record<string, unknown>;
  cssHints?: Record<string, string>;
}

export interface DashboardDoc {
  id: string;
  title: string;
  author: string;
  canvasAspect: number;
  revision: number;
  components: DashComponent[];
}

export interface ReferenceEntry {
  referenceId: string;
  title: string;
  author: string;
  bookmarked: boolean;
  tags: string[];
  addedAt: string | null;
  componentCount: number;
}

export interface BundleInfo {
  name: BundleName;
  features: string[];
  includesGeometry: boolean;
  keys: string[];
}

export interface TransferReport {
  pairs: { sourceId: string; targetId: string; score: number }[];
  representativeUsedFor: string[];
  placeholdersCreated: string[];
  droppedKeys: { targetId: string; key: string; reason: string }[];
  lockedSkips: { targetId: string; key: string }[];
  notes: string[];
}

export interface AttributionRow {
  category: string;
  referenceTitle: string;
  author: string;
  attributeCount: number;
}

export type SelectionRole = 'source' | 'target';
