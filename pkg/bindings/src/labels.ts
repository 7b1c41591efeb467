/**
 * The strict `image_id,label` CSV the augmentation CLI reads and
 * writes. Exact header, exact field counts, integer labels, no
 * duplicate ids.
 */

const HEADER = 'image_id,label';

/** Serialize an id-to-label map in insertion order. */
export function encodeLabelCsv(labels: Map<string, number>): string {
  const lines = [HEADER];
  for (const [id, label] of labels) {
    if (!Number.isInteger(label)) {
      throw new Error(`label for ${JSON.stringify(id)} must be an integer, got ${label}`);
    }
    lines.push(`${id},${label}`);
  }
  return lines.join('\n') + '\n';
}

/** Parse a label CSV, rejecting malformed rows and duplicate ids. */
export function decodeLabelCsv(text: string): Map<string, number> {
  const lines = text.split('\n');
  if (lines[lines.length - 1] === '') {
    lines.pop();
  }
  if (lines.length === 0 || lines[0] !== HEADER) {
    throw new Error(`expected header ${JSON.stringify(HEADER)}, got ${JSON.stringify(lines[0] ?? '')}`);
  }
  const labels = new Map<string, number>();
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(',');
    if (fields.length !== 2) {
      throw new Error(`line ${i + 1}: expected 2 fields, got ${fields.length}`);
    }
    const [id, text_] = fields;
    if (labels.has(id)) {
      throw new Error(`line ${i + 1}: duplicate image_id ${JSON.stringify(id)}`);
    }
    const label = Number(text_);
    if (!Number.isInteger(label)) {
      throw new Error(`line ${i + 1}: label must be an integer, got ${JSON.stringify(text_)}`);
    }
    labels.set(id, label);
  }
  return labels;
}
