/**
 * Whole-word containment check mirroring the service-side invariant that a
 * task's aspect term appears in its text (word characters are letters and
 * digits; matching is case-insensitive).
 */

function isWordChar(ch: string): boolean {
  return /[\p{L}\p{N}]/u.test(ch);
}

export function containsWholeWord(text: string, phrase: string): boolean {
  const haystack = text.toLowerCase();
  const needle = phrase.toLowerCase().trim();
  if (!needle) {
    return false;
  }
  let from = 0;
  while (true) {
    const at = haystack.indexOf(needle, from);
    if (at === -1) {
      return false;
    }
    const end = at + needle.length;
    const leftOk = at === 0 || !(isWordChar(haystack[at - 1]) && isWordChar(needle[0]));
    const rightOk = end === haystack.length ||
      !(isWordChar(needle[needle.length - 1]) && isWordChar(haystack[end]));
    if (leftOk && rightOk) {
      return true;
    }
    from = at + 1;
  }
}
