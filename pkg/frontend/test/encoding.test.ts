import { describe, expect, it } from "vitest";
import {
  EOS_ID,
  PAD_ID,
  SENTINEL_ID_BASE,
  UNK_ID,
  VOCAB_SIZE,
  checkIds,
  decodeText,
  encodeText,
  sentinel,
} from "../src/encoding.js";

describe("encoding", () => {
  it("maps byte 'A' to id 68", () => {
    expect(encodeText("A")).toEqual([68]);
  });

  it("reserves pad/eos/unk", () => {
    expect([PAD_ID, EOS_ID, UNK_ID]).toEqual([0, 1, 2]);
  });

  it("maps sentinels to single ids", () => {
    expect(encodeText("<extra_id_0>hw<extra_id_1>")).toEqual([
      SENTINEL_ID_BASE,
      "h".charCodeAt(0) + 3,
      "w".charCodeAt(0) + 3,
      SENTINEL_ID_BASE + 1,
    ]);
  });

  it("round-trips multi-byte text", () => {
    for (const text of ["héllo wörld", "don't", "<extra_id_5>a<extra_id_6>", "ça va?"]) {
      expect(decodeText(encodeText(text))).toBe(text);
    }
  });

  it("drops control ids when decoding", () => {
    expect(decodeText([PAD_ID, 68, EOS_ID])).toBe("A");
  });

  it("rejects out-of-vocabulary ids", () => {
    expect(() => checkIds([VOCAB_SIZE])).toThrow(/vocabulary/);
    expect(() => checkIds([-1])).toThrow(/vocabulary/);
  });

  it("formats sentinels", () => {
    expect(sentinel(0)).toBe("<extra_id_0>");
    expect(() => sentinel(100)).toThrow();
  });
});
