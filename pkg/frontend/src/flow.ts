/** Runs async tasks strictly one after another, in submission order. */
export class SequentialQueue {
  private tail: Promise<void> = Promise.resolve();

  enqueue<T>(task: () => Promise<T>): Promise<T> {
    const result = this.tail.then(() => task());
    this.tail = result.then(
      () => undefined,
      () => undefined,
    );
    return result;
  }

  /** Resolves once every task submitted so far has settled. */
  drain(): Promise<void> {
    return this.tail;
  }
}

/**
 * Keeps at most one request in flight. A request made while busy is
 * remembered; when the current one settles, only the most recent
 * pending request runs.
 */
export class AnalysisGate {
  private busy = false;
  private pending: (() => Promise<void>) | null = null;
  private settled: Promise<void> = Promise.resolve();

  request(run: () => Promise<void>): void {
    if (this.busy) {
      this.pending = run;
      return;
    }
    this.busy = true;
    this.settled = run()
      .catch(() => undefined)
      .then(() => {
        this.busy = false;
        const next = this.pending;
        this.pending = null;
        if (next) this.request(next);
      });
  }

  get inFlight(): boolean {
    return this.busy;
  }

  /** Resolves once the gate is idle (no running or pending request). */
  async drain(): Promise<void> {
    while (this.busy || this.pending) {
      await this.settled;
    }
  }
}
