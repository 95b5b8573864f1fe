import { debounce, type Debounced } from "./debounce.js";

export interface DateRange {
  start: string; // ISO date
  end: string;
}

export const TIMELINE_DEBOUNCE_MS = 250;

/**
 * Dual-handle timeline model. Handle moves keep start <= end by clamping the
 * handle being dragged, and range changes reach the callback debounced so
 * rapid scrubbing produces at most one refetch.
 */
export class TimelineModel {
  private startValue: string;
  private endValue: string;
  private readonly emit: Debounced<[DateRange]>;

  constructor(
    readonly minDate: string,
    readonly maxDate: string,
    onChange: (range: DateRange) => void,
    debounceMs: number = TIMELINE_DEBOUNCE_MS,
  ) {
    if (minDate > maxDate) {
      throw new Error(`timeline min ${minDate} after max ${maxDate}`);
    }
    this.startValue = minDate;
    this.endValue = maxDate;
    this.emit = debounce(onChange, debounceMs);
  }

  get range(): DateRange {
    return { start: this.startValue, end: this.endValue };
  }

  get isFullRange(): boolean {
    return this.startValue === this.minDate && this.endValue === this.maxDate;
  }

  private clampToTrack(date: string): string {
    if (date < this.minDate) return this.minDate;
    if (date > this.maxDate) return this.maxDate;
    return date;
  }

  setStart(date: string): void {
    const next = this.clampToTrack(date);
    this.startValue = next > this.endValue ? this.endValue : next;
    this.emit(this.range);
  }

  setEnd(date: string): void {
    const next = this.clampToTrack(date);
    this.endValue = next < this.startValue ? this.startValue : next;
    this.emit(this.range);
  }

  reset(): void {
    this.startValue = this.minDate;
    this.endValue = this.maxDate;
    this.emit(this.range);
  }

  /** Force any pending change out immediately (e.g. on drag end). */
  flush(): void {
    this.emit.flush();
  }

  dispose(): void {
    this.emit.cancel();
  }
}
