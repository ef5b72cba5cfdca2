/**
 * Keyboard shortcuts: digits 1/2/3 map to the three choices in render
 * order. Anything else maps to nothing.
 */

export function choiceForKey(key: string, choices: string[]): string | null {
  const index = ["1", "2", "3"].indexOf(key);
  if (index === -1 || index >= choices.length) {
    return null;
  }
  return choices[index];
}
