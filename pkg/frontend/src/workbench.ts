import type { ApiClient } from "./api.js";
import { SUPERSEDED } from "./api.js";
import type { GenerateResponse, RecipeItemWire } from "./types.js";

export const ASPECTS = ["whole", "community", "problem_statement", "technology"] as const;
export type Aspect = (typeof ASPECTS)[number];

export const MAX_RECIPE_ITEMS = 8;

export interface RecipeChip {
  projectId: string;
  title: string;
  aspect: Aspect;
}

export type AddResult =
  | { ok: true }
  | { ok: false; reason: "duplicate" | "full" | "bad_aspect" };

/**
 * Generation Workbench state: the recipe being assembled, the last generated
 * idea, and provenance-panel visibility. Mirrors the server's recipe
 * invariants (1..8 items, no duplicate project/aspect pairs) so invalid
 * recipes are rejected at drag time with a hint instead of a server error.
 */
export class WorkbenchModel {
  private readonly chips: RecipeChip[] = [];
  lastIdea: GenerateResponse | null = null;
  provenanceVisible = false;
  generating = false;

  get items(): readonly RecipeChip[] {
    return this.chips;
  }

  get canGenerate(): boolean {
    return this.chips.length >= 1 && !this.generating;
  }

  addItem(projectId: string, title: string, aspect: Aspect = "whole"): AddResult {
    if (!ASPECTS.includes(aspect)) return { ok: false, reason: "bad_aspect" };
    if (this.chips.length >= MAX_RECIPE_ITEMS) return { ok: false, reason: "full" };
    const duplicate = this.chips.some(
      (chip) => chip.projectId === projectId && chip.aspect === aspect,
    );
    if (duplicate) return { ok: false, reason: "duplicate" };
    this.chips.push({ projectId, title, aspect });
    return { ok: true };
  }

  removeItem(index: number): void {
    if (index >= 0 && index < this.chips.length) this.chips.splice(index, 1);
  }

  clear(): void {
    this.chips.length = 0;
  }

  toggleProvenance(): void {
    this.provenanceVisible = !this.provenanceVisible;
  }

  private wireItems(): RecipeItemWire[] {
    return this.chips.map((chip) => ({
      project_id: chip.projectId,
      aspect: chip.aspect,
    }));
  }

  /**
   * POST the recipe. On success the idea (including prompt_used, displayed
   * verbatim in the provenance panel) is stored; on failure the recipe is
   * left intact so the user can retry.
   */
  async generate(api: ApiClient): Promise<GenerateResponse | null> {
    if (!this.canGenerate) return null;
    this.generating = true;
    try {
      const idea = await api.generate(this.wireItems());
      if (idea === SUPERSEDED) return null;
      this.lastIdea = idea;
      return idea;
    } finally {
      this.generating = false;
    }
  }
}
