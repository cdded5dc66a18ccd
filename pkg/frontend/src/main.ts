/** Application entry: session picker, sentence list, and the editor.
 *
 * The service origin defaults to the page's own and can be overridden
 * with ?api=http://host:port so the static page can be opened from disk
 * during annotation sessions.
 */

import { AnnotationApi, ApiError } from "./api.js";
import { renderEditor } from "./render.js";
import { SentenceEditor } from "./state.js";

const params = new URLSearchParams(location.search);
const api = new AnnotationApi(params.get("api") ?? "");
const root = document.getElementById("app") ?? document.body;

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

function showError(err: unknown): void {
  const message = err instanceof Error ? err.message : String(err);
  const box = el("div", "error", message);
  root.prepend(box);
  setTimeout(() => box.remove(), 6000);
}

async function showSessions(): Promise<void> {
  const sessions = await api.listSessions();
  const page = el("div", "page");
  page.append(el("h1", undefined, "annotation sessions"));
  const list = el("ul", "sessions");
  for (const s of sessions) {
    const item = el("li");
    const link = el("button", "link", `${s.name} (${s.sentences} sentences)`);
    link.type = "button";
    link.addEventListener("click", () => void guard(showSentences(s.id)));
    item.append(link);
    list.append(item);
  }
  page.append(list);

  const form = el("div", "create");
  form.append(el("h2", undefined, "new session"));
  const idInput = el("input");
  idInput.placeholder = "session id";
  const tagged = el("textarea");
  tagged.placeholder = "# sent_id = S1\nSen.\tPROPN\nMitchell\tPROPN\n...";
  tagged.rows = 8;
  const create = el("button", undefined, "create");
  create.type = "button";
  create.addEventListener("click", () =>
    void guard(
      api
        .createSession(idInput.value.trim(), tagged.value)
        .then((s) => showSentences(s.id))
    )
  );
  form.append(idInput, tagged, create);
  page.append(form);
  root.replaceChildren(page);
}

async function showSentences(sessionId: string): Promise<void> {
  const sentences = await api.listSentences(sessionId);
  const page = el("div", "page");
  const back = el("button", "link", "< sessions");
  back.type = "button";
  back.addEventListener("click", () => void guard(showSessions()));
  page.append(back, el("h1", undefined, sessionId));
  const exportLink = el("a", "export", "export gold file");
  exportLink.href = `${params.get("api") ?? ""}/sessions/${encodeURIComponent(sessionId)}/export`;
  exportLink.target = "_blank";
  page.append(exportLink);
  const list = el("ul", "sentences");
  for (const s of sentences) {
    const item = el("li");
    const link = el(
      "button",
      "link",
      `${s.id}: ${s.text} - ${s.clusters} facts`
    );
    link.type = "button";
    link.addEventListener("click", () => void guard(showEditor(sessionId, s.id)));
    item.append(link);
    list.append(item);
  }
  page.append(list);
  root.replaceChildren(page);
}

async function showEditor(sessionId: string, sentenceId: string): Promise<void> {
  const detail = await api.getSentence(sessionId, sentenceId);
  const editor = new SentenceEditor(detail);
  const page = el("div", "page");
  const back = el("button", "link", `< ${sessionId}`);
  back.type = "button";
  back.addEventListener("click", () => void guard(showSentences(sessionId)));
  page.append(back, el("h1", undefined, sentenceId));
  const mount = el("div", "editor");
  page.append(mount);
  root.replaceChildren(page);

  const redraw = (): void =>
    renderEditor(mount, editor, {
      onToken: (i) => {
        editor.clickToken(i);
        redraw();
      },
      onSlot: (slot) => {
        editor.setSlot(slot);
        redraw();
      },
      onSelect: (cluster, draft) => {
        editor.setActive(cluster, draft);
        redraw();
      },
      onAddCluster: () => {
        editor.addCluster();
        redraw();
      },
      onRemoveCluster: (i) => {
        editor.removeCluster(i);
        redraw();
      },
      onAddDraft: () => {
        editor.addDraft();
        redraw();
      },
      onRemoveDraft: (i) => {
        editor.removeDraft(i);
        redraw();
      },
      onToggleEntity: () => {
        editor.toggleEntityClean();
        redraw();
      },
      onSave: () => void save(),
      onReload: () => void reload(),
    });

  const reload = async (): Promise<void> => {
    await guard(
      api.getSentence(sessionId, sentenceId).then((fresh) => {
        editor.applyServer(fresh);
        redraw();
      })
    );
  };

  const save = async (): Promise<void> => {
    try {
      const updated = await api.putAnnotation(
        sessionId,
        sentenceId,
        editor.revision,
        editor.payload()
      );
      editor.applyServer(updated);
      redraw();
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // no silent overwrite: the annotator decides
        const discard = confirm(
          "Someone saved this sentence first. Load their version " +
            "and discard your unsaved edits? (Cancel keeps editing.)"
        );
        if (discard) await reload();
      } else {
        showError(err);
      }
    }
  };

  redraw();
}

async function guard(work: Promise<unknown>): Promise<void> {
  try {
    await work;
  } catch (err) {
    showError(err);
  }
}

void guard(showSessions());
