// Optional spoken output. Browsers without speechSynthesis (and the
// test runner) fall through silently; the visual feed still shows
// every clip label.

export function speakIfAvailable(text: string): boolean {
  const host = globalThis as {
    speechSynthesis?: { speak(utterance: unknown): void };
    SpeechSynthesisUtterance?: new (text: string) => unknown;
  };
  if (!host.speechSynthesis || !host.SpeechSynthesisUtterance) return false;
  host.speechSynthesis.speak(new host.SpeechSynthesisUtterance(text));
  return true;
}
