import type { SemanticsName } from "./types.js";
import { describeScope, formatAnswer, validateQueryText } from "./state.js";
import type { HistoryEntry } from "./state.js";
import { answerColor } from "./palette.js";

const SEMANTICS: SemanticsName[] = ["AR", "IAR", "ICR"];

export class QueryConsole {
  readonly root: HTMLElement;
  readonly input: HTMLInputElement;
  readonly semanticsSelect: HTMLSelectElement;
  readonly submitButton: HTMLButtonElement;
  private readonly errorBox: HTMLElement;
  private readonly scopeBox: HTMLElement;
  private readonly historyList: HTMLElement;

  constructor(
    container: HTMLElement,
    private readonly onSubmit: (query: string, semantics: SemanticsName) => void,
  ) {
    this.root = document.createElement("div");
    this.root.className = "query-console";

    const row = document.createElement("div");
    row.className = "query-row";
    this.input = document.createElement("input");
    this.input.type = "text";
    this.input.className = "query-input";
    this.input.placeholder = "e.g. baby(X), get_ill(X)";
    row.appendChild(this.input);

    this.semanticsSelect = document.createElement("select");
    this.semanticsSelect.className = "semantics-select";
    for (const name of SEMANTICS) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      this.semanticsSelect.appendChild(option);
    }
    row.appendChild(this.semanticsSelect);

    this.submitButton = document.createElement("button");
    this.submitButton.className = "query-submit";
    this.submitButton.textContent = "Ask";
    this.submitButton.addEventListener("click", () => this.submit());
    row.appendChild(this.submitButton);
    this.root.appendChild(row);

    this.input.addEventListener("keydown", (e) => {
      if ((e as KeyboardEvent).key === "Enter") this.submit();
    });

    this.errorBox = document.createElement("div");
    this.errorBox.className = "query-error";
    this.errorBox.style.display = "none";
    this.root.appendChild(this.errorBox);

    this.scopeBox = document.createElement("div");
    this.scopeBox.className = "scope-description";
    this.scopeBox.textContent = "no scope selected";
    this.root.appendChild(this.scopeBox);

    const historyTitle = document.createElement("div");
    historyTitle.className = "history-title";
    historyTitle.textContent = "Query history";
    this.root.appendChild(historyTitle);

    this.historyList = document.createElement("ol");
    this.historyList.className = "query-history";
    this.root.appendChild(this.historyList);

    container.appendChild(this.root);
  }

  submit(): void {
    const text = this.input.value;
    const problem = validateQueryText(text);
    if (problem) {
      this.showError(problem);
      return;
    }
    this.clearError();
    this.onSubmit(text.trim(), this.semanticsSelect.value as SemanticsName);
  }

  showError(message: string): void {
    this.errorBox.textContent = message;
    this.errorBox.style.display = "";
  }

  clearError(): void {
    this.errorBox.textContent = "";
    this.errorBox.style.display = "none";
  }

  setScopeDescription(text: string): void {
    this.scopeBox.textContent = text;
  }

  renderHistory(entries: readonly HistoryEntry[]): void {
    this.historyList.innerHTML = "";
    for (const entry of entries) {
      const item = document.createElement("li");
      item.className = "history-entry";

      const queryPart = document.createElement("span");
      queryPart.className = "history-query";
      queryPart.textContent = `${entry.query} [${entry.semantics}] on ${describeScope(entry.scope)}`;
      item.appendChild(queryPart);

      const answerPart = document.createElement("span");
      answerPart.className = "history-answer";
      answerPart.textContent = formatAnswer(entry.answer);
      answerPart.style.color = answerColor(entry.answer);
      item.appendChild(answerPart);

      this.historyList.appendChild(item);
    }
  }
}
