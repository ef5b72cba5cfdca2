/**
 * Self-issued annotator identity: an opaque token generated on first visit
 * and kept in local storage. No accounts.
 */

export interface TokenStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

const TOKEN_KEY = "adoptrace.annotator";
const SEEN_KEY = "adoptrace.instructions_seen";

export function newToken(random: () => number = Math.random): string {
  const body = Array.from({ length: 4 }, () =>
    Math.floor(random() * 36 ** 4).toString(36).padStart(4, "0")).join("");
  return `ann-${body}`;
}

export function getOrCreateToken(store: TokenStore, random?: () => number): string {
  const existing = store.getItem(TOKEN_KEY);
  if (existing) {
    return existing;
  }
  const token = newToken(random);
  store.setItem(TOKEN_KEY, token);
  return token;
}

export function isReturningAnnotator(store: TokenStore): boolean {
  return store.getItem(TOKEN_KEY) !== null && store.getItem(SEEN_KEY) === "yes";
}

export function markInstructionsSeen(store: TokenStore): void {
  store.setItem(SEEN_KEY, "yes");
}
