/* Small state helpers: stale-response discarding and debounce.

   Every server round-trip carries a sequence number; a response is applied
   only if no newer request has started since, so rapid interactions never
   paint stale results. */

export class SequenceGate {
  private latest = 0;

  next(): number {
    return ++this.latest;
  }

  isCurrent(seq: number): boolean {
    return seq === this.latest;
  }
}

/* Runs `task` seq-gated; `apply` fires only for the newest request. */
export class GatedRunner {
  private gate = new SequenceGate();
  private inFlight: Promise<void> = Promise.resolve();

  run<T>(task: () => Promise<T>, apply: (value: T) => void,
         onError?: (error: unknown) => void): Promise<void> {
    const seq = this.gate.next();
    const step = task().then(
      (value) => {
        if (this.gate.isCurrent(seq)) apply(value);
      },
      (error) => {
        if (this.gate.isCurrent(seq) && onError) onError(error);
      },
    );
    this.inFlight = this.inFlight.then(() => step);
    return step;
  }

  /* Resolves when every update issued so far has settled. */
  idle(): Promise<void> {
    return this.inFlight;
  }
}

export function debounced(ms: number, fn: () => void): () => void {
  if (ms <= 0) return fn;
  let timer: ReturnType<typeof setTimeout> | undefined;
  return () => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(fn, ms);
  };
}
