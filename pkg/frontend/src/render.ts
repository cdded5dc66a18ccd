/** DOM construction for the sentence editor. No framework: every view is
 * rebuilt from the editor state after each interaction, which is plenty
 * fast at annotation scale and keeps the data flow one-way.
 */

import type { SentenceEditor, SlotName } from "./state.js";
import { SLOTS } from "./state.js";

export interface EditorHandlers {
  onToken(index: number): void;
  onSlot(slot: SlotName): void;
  onSelect(cluster: number, draft: number): void;
  onAddCluster(): void;
  onRemoveCluster(index: number): void;
  onAddDraft(): void;
  onRemoveDraft(index: number): void;
  onToggleEntity(): void;
  onSave(): void;
  onReload(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** One clickable chip per token, colored by active-draft membership. */
export function renderTokenRow(
  editor: SentenceEditor,
  handlers: EditorHandlers
): HTMLElement {
  const row = el("div", "token-row");
  const draft = editor.draft;
  for (const token of editor.tokens) {
    const chip = el("button", "token");
    chip.type = "button";
    chip.classList.add(`hl-${token.highlight}`);
    let label = token.surface;
    if (draft) {
      for (const slot of SLOTS) {
        if (draft[slot].includes(token.i)) chip.classList.add(`in-${slot}`);
      }
      if (
        draft.optional.has(token.i) &&
        SLOTS.some((slot) => draft[slot].includes(token.i))
      ) {
        chip.classList.add("optional");
        label = `[ ${token.surface} ]`;
      }
    }
    chip.textContent = label;
    chip.title = `${token.pos}${token.deprel ? " / " + token.deprel : ""}`;
    chip.dataset.index = String(token.i);
    chip.addEventListener("click", () => handlers.onToken(token.i));
    row.append(chip);
  }
  return row;
}

/** Slot-mode switch plus the current draft's slot contents, in pick order. */
export function renderSlotPanel(
  editor: SentenceEditor,
  handlers: EditorHandlers
): HTMLElement {
  const panel = el("div", "slot-panel");
  const draft = editor.draft;
  for (const slot of SLOTS) {
    const line = el("div", `slot-line slot-${slot}`);
    if (slot === editor.activeSlot) line.classList.add("active");
    const button = el("button", "slot-name", slot);
    button.type = "button";
    button.addEventListener("click", () => handlers.onSlot(slot));
    line.append(button);
    const content = el("span", "slot-content");
    if (draft) {
      content.textContent = draft[slot]
        .map((i) => {
          const word = editor.tokens[i]?.surface ?? `#${i}`;
          return draft.optional.has(i) ? `[ ${word} ]` : word;
        })
        .join(" ");
    }
    line.append(content);
    panel.append(line);
  }
  if (draft) {
    const entity = el("label", "entity-flag");
    const box = el("input");
    box.type = "checkbox";
    box.checked = draft.entityClean;
    box.addEventListener("change", () => handlers.onToggleEntity());
    entity.append(box, document.createTextNode(" arguments are wholesome entities"));
    panel.append(entity);
  }
  return panel;
}

/** Fact clusters with draft tabs and expanded-variant counts. */
export function renderClusterPalette(
  editor: SentenceEditor,
  handlers: EditorHandlers
): HTMLElement {
  const palette = el("div", "clusters");
  editor.clusters.forEach((cluster, ci) => {
    const card = el("div", "cluster");
    if (ci === editor.activeCluster) card.classList.add("active");
    const head = el("div", "cluster-head");
    const name = el("button", "cluster-name", cluster.id);
    name.type = "button";
    name.addEventListener("click", () => handlers.onSelect(ci, 0));
    const local = editor.variantCount(ci);
    const server = editor.serverVariants.get(cluster.id);
    const badge = el(
      "span",
      "variants",
      editor.dirty || server === undefined
        ? `${local} variants (unsaved)`
        : `${server} variants`
    );
    const drop = el("button", "remove", "x");
    drop.type = "button";
    drop.addEventListener("click", () => handlers.onRemoveCluster(ci));
    head.append(name, badge, drop);
    card.append(head);

    const tabs = el("div", "draft-tabs");
    cluster.drafts.forEach((_, di) => {
      const tab = el("button", "draft-tab", `t${di + 1}`);
      tab.type = "button";
      if (ci === editor.activeCluster && di === editor.activeDraft) {
        tab.classList.add("active");
      }
      tab.addEventListener("click", () => handlers.onSelect(ci, di));
      tabs.append(tab);
    });
    if (ci === editor.activeCluster) {
      const plus = el("button", "draft-tab add", "+ alternative");
      plus.type = "button";
      plus.addEventListener("click", () => handlers.onAddDraft());
      tabs.append(plus);
      if (cluster.drafts.length > 1) {
        const minus = el("button", "draft-tab remove", "- alternative");
        minus.type = "button";
        minus.addEventListener("click", () =>
          handlers.onRemoveDraft(editor.activeDraft)
        );
        tabs.append(minus);
      }
    }
    card.append(tabs);
    palette.append(card);
  });
  const add = el("button", "add-cluster", "+ new fact");
  add.type = "button";
  add.addEventListener("click", () => handlers.onAddCluster());
  palette.append(add);
  return palette;
}

/** Save/reload bar with the dirty flag and blocking validation messages. */
export function renderStatusBar(
  editor: SentenceEditor,
  handlers: EditorHandlers
): HTMLElement {
  const bar = el("div", "status-bar");
  const state = el(
    "span",
    editor.dirty ? "state dirty" : "state clean",
    editor.dirty ? "unsaved edits" : `saved (revision ${editor.revision})`
  );
  const problems = editor.validate();
  const save = el("button", "save", "save");
  save.type = "button";
  save.disabled = !editor.dirty || problems.length > 0;
  save.addEventListener("click", () => handlers.onSave());
  const reload = el("button", "reload", "reload");
  reload.type = "button";
  reload.addEventListener("click", () => handlers.onReload());
  bar.append(state, save, reload);
  if (problems.length > 0) {
    const list = el("ul", "problems");
    for (const problem of problems) list.append(el("li", undefined, problem));
    bar.append(list);
  }
  return bar;
}

export function renderEditor(
  root: HTMLElement,
  editor: SentenceEditor,
  handlers: EditorHandlers
): void {
  root.replaceChildren(
    renderStatusBar(editor, handlers),
    renderTokenRow(editor, handlers),
    renderSlotPanel(editor, handlers),
    renderClusterPalette(editor, handlers)
  );
}
