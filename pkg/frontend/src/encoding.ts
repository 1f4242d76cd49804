/**
 * Byte-level vocabulary shared with the data pipeline: pad 0, eos 1, unk 2,
 * UTF-8 byte b at id b + 3, and 100 sentinel markers <extra_id_0>..99
 * starting at id 259.
 */

export const PAD_ID = 0;
export const EOS_ID = 1;
export const UNK_ID = 2;
export const BYTE_ID_OFFSET = 3;
export const SENTINEL_ID_BASE = 259;
export const NUM_SENTINELS = 100;
export const VOCAB_SIZE = SENTINEL_ID_BASE + NUM_SENTINELS;

const SENTINEL_RE = /<extra_id_(\d{1,2})>/g;

export function sentinel(index: number): string {
  if (index < 0 || index >= NUM_SENTINELS) {
    throw new Error(`sentinel index out of range: ${index}`);
  }
  return `<extra_id_${index}>`;
}

/** Encode text to ids; sentinel markers become single ids. */
export function encodeText(text: string): number[] {
  const ids: number[] = [];
  let cursor = 0;
  SENTINEL_RE.lastIndex = 0;
  for (const match of text.matchAll(SENTINEL_RE)) {
    pushBytes(ids, text.slice(cursor, match.index));
    ids.push(SENTINEL_ID_BASE + Number(match[1]));
    cursor = (match.index ?? 0) + match[0].length;
  }
  pushBytes(ids, text.slice(cursor));
  return ids;
}

function pushBytes(ids: number[], chunk: string): void {
  for (const byte of Buffer.from(chunk, "utf-8")) {
    ids.push(byte + BYTE_ID_OFFSET);
  }
}

/** Decode ids back to text; pad/eos/unk are dropped. */
export function decodeText(ids: number[]): string {
  const parts: string[] = [];
  let bytes: number[] = [];
  const flush = () => {
    if (bytes.length) {
      parts.push(Buffer.from(bytes).toString("utf-8"));
      bytes = [];
    }
  };
  for (const id of ids) {
    if (id >= BYTE_ID_OFFSET && id < SENTINEL_ID_BASE) {
      bytes.push(id - BYTE_ID_OFFSET);
    } else if (id >= SENTINEL_ID_BASE && id < VOCAB_SIZE) {
      flush();
      parts.push(sentinel(id - SENTINEL_ID_BASE));
    } else {
      flush(); // pad / eos / unk carry no text
    }
  }
  flush();
  return parts.join("");
}

export function checkIds(ids: number[]): void {
  for (const id of ids) {
    if (!Number.isInteger(id) || id < 0 || id >= VOCAB_SIZE) {
      throw new Error(
        `id ${id} outside vocabulary [0, ${VOCAB_SIZE}); ` +
          "example file was built with an incompatible encoding"
      );
    }
  }
}
